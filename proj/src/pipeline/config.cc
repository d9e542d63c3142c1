// Copyright (c) 2026 The idfvc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "idfvc/pipeline/config.h"

#include <charconv>
#include <cmath>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <variant>

#include "idfvc/common/errors.h"
#include "idfvc/pipeline/idfv.h"

namespace idfvc::pipeline {

namespace {

// The seed shares the size_t alternative.
static_assert(std::is_same_v<std::uint64_t, std::size_t>);
using Field = std::variant<std::size_t*, float*, std::string*>;

// Ordered so that format_config output is stable.
std::vector<std::pair<std::string, Field>> fields_of(TrainConfig& c) {
  auto& m = c.model;
  auto& w = c.weights;
  return {
      {"seed", &c.seed},
      {"speakers", &m.speakers},
      {"utterances_per_speaker", &c.utterances_per_speaker},
      {"face_frames", &c.face_frames},
      {"words_per_utterance", &c.words_per_utterance},
      {"epochs", &c.epochs},
      {"batch_size", &c.batch_size},
      {"learning_rate", &c.learning_rate},
      {"optimizer", &c.optimizer},
      {"q_steps", &c.q_steps},
      {"q_learning_rate", &c.q_learning_rate},
      {"tau", &c.tau},
      {"cpc_weight", &c.cpc_weight},
      {"commitment_weight", &c.commitment_weight},
      {"holdout_fraction", &c.holdout_fraction},
      {"griffin_lim_iters", &c.griffin_lim_iters},
      {"lambda_con", &w.con},
      {"lambda_mi", &w.mi},
      {"lambda_idf", &w.idf},
      {"lambda_ids", &w.ids},
      {"lambda_fv", &w.fv},
      {"face_dim", &m.face_dim},
      {"audio_dim", &m.audio_dim},
      {"speaker_dim", &m.speaker_dim},
      {"content_dim", &m.content_dim},
      {"codebook_size", &m.codebook_size},
      {"prompts", &m.prompts},
      {"mel_dim", &m.mel_dim},
      {"memory_slots", &m.memory_slots},
      {"attention_dim", &m.attention_dim},
      {"heads", &m.heads},
      {"ffn_hidden", &m.ffn_hidden},
      {"content_hidden", &m.content_hidden},
      {"decoder_hidden", &m.decoder_hidden},
      {"pitch_bins", &m.pitch_bins},
      {"pitch_dim", &m.pitch_dim},
      {"pitch_lo", &m.pitch_lo},
      {"pitch_hi", &m.pitch_hi},
      {"cpc_steps", &m.cpc_steps},
      {"qnet_hidden", &m.qnet_hidden},
  };
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <typename T>
bool parse_number(const std::string& text, T& out) {
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, out);
  return ec == std::errc() && ptr == end;
}

std::string to_text(float v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

}  // namespace

void TrainConfig::validate() const {
  model.validate();
  weights.validate();
  stft.validate();
  if (model.speakers < 2) throw ValidationError("speakers must be >= 2");
  if (utterances_per_speaker < 1) throw ValidationError("utterances_per_speaker must be >= 1");
  if (face_frames < 1) throw ValidationError("face_frames must be >= 1");
  if (words_per_utterance < 1) throw ValidationError("words_per_utterance must be >= 1");
  if (batch_size < 2) throw ValidationError("batch_size must be >= 2");
  if (optimizer != "sgd" && optimizer != "adam") throw ValidationError("optimizer must be 'sgd' or 'adam'");
  auto positive = [](float v, const char* name) {
    if (!std::isfinite(v) || v <= 0.0f) throw ValidationError(std::string(name) + " must be positive");
  };
  auto nonnegative = [](float v, const char* name) {
    if (!std::isfinite(v) || v < 0.0f) throw ValidationError(std::string(name) + " must be >= 0");
  };
  positive(learning_rate, "learning_rate");
  positive(q_learning_rate, "q_learning_rate");
  positive(tau, "tau");
  nonnegative(cpc_weight, "cpc_weight");
  nonnegative(commitment_weight, "commitment_weight");
  if (!(holdout_fraction > 0.0f && holdout_fraction < 1.0f)) {
    throw ValidationError("holdout_fraction must lie in (0, 1)");
  }
  if (griffin_lim_iters < 1) throw ValidationError("griffin_lim_iters must be >= 1");
}

TrainConfig parse_config(const std::string& text, const std::string& origin) {
  TrainConfig c;
  std::map<std::string, Field> table;
  for (auto& [k, f] : fields_of(c)) table.emplace(k, f);
  std::set<std::string> seen;
  std::istringstream in(text);
  std::string line;
  for (std::size_t lineno = 1; std::getline(in, line); ++lineno) {
    const std::string where = origin + ":" + std::to_string(lineno);
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ValidationError(where + ": expected key=value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const auto it = table.find(key);
    if (it == table.end()) throw ValidationError(where + ": unknown key '" + key + "'");
    if (!seen.insert(key).second) throw ValidationError(where + ": key '" + key + "' given twice");
    const bool ok = std::visit(
        [&](auto* p) {
          using T = std::remove_pointer_t<decltype(p)>;
          if constexpr (std::is_same_v<T, std::string>) {
            *p = value;
            return !value.empty();
          } else {
            return parse_number(value, *p);
          }
        },
        it->second);
    if (!ok) throw ValidationError(where + ": bad value '" + value + "' for '" + key + "'");
  }
  c.validate();
  return c;
}

TrainConfig load_config(const std::string& path) { return parse_config(read_text_file(path), path); }

std::string format_config(const TrainConfig& config) {
  TrainConfig copy = config;
  std::ostringstream out;
  for (auto& [key, field] : fields_of(copy)) {
    out << key << " = ";
    std::visit(
        [&](auto* p) {
          using T = std::remove_pointer_t<decltype(p)>;
          if constexpr (std::is_same_v<T, float>) {
            out << to_text(*p);
          } else {
            out << *p;
          }
        },
        field);
    out << '\n';
  }
  return out.str();
}

}  // namespace idfvc::pipeline
