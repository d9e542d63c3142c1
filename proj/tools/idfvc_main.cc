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

// Command-line front end: synth-data, train, infer, interp, eval, export-mel-csv.

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "idfvc/common/errors.h"
#include "idfvc/dsp/audio.h"
#include "idfvc/pipeline/config.h"
#include "idfvc/pipeline/corpus.h"
#include "idfvc/pipeline/idfv.h"
#include "idfvc/pipeline/inference.h"
#include "idfvc/pipeline/trainer.h"

namespace fs = std::filesystem;
using namespace idfvc;
using namespace idfvc::pipeline;

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitIo = 3;
constexpr int kExitNumeric = 4;

struct Common {
  std::string config_path;
  std::optional<std::uint64_t> seed;
};

TrainConfig resolve_config(const Common& c) {
  TrainConfig cfg = c.config_path.empty() ? parse_config("") : load_config(c.config_path);
  if (c.seed) cfg.seed = *c.seed;
  return cfg;
}

void write_conversion(const std::string& out, const Conversion& conv) {
  fs::create_directories(out);
  write_idfv((fs::path(out) / "converted.mel.idfv").string(), conv.mel);
  dsp::write_wav((fs::path(out) / "converted.wav").string(), conv.wave);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Face-conditioned voice conversion toolkit"};
  app.require_subcommand(1);

  Common common;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", common.config_path, "key=value config file");
    sub->add_option("--seed", common.seed, "overrides the config seed");
  };

  std::string out, corpus_dir, checkpoint, face, face_a, face_b, source, input;
  float alpha = 0.5f;

  auto* synth = app.add_subcommand("synth-data", "write a synthetic corpus");
  add_common(synth);
  synth->add_option("--out", out, "corpus directory")->required();

  auto* train_cmd = app.add_subcommand("train", "train a model on a corpus");
  add_common(train_cmd);
  train_cmd->add_option("--corpus", corpus_dir, "corpus directory")->required();
  train_cmd->add_option("--out", out, "run directory")->required();

  auto* infer_cmd = app.add_subcommand("infer", "convert source audio to the voice of a face");
  infer_cmd->add_option("--checkpoint", checkpoint, "checkpoint directory")->required();
  infer_cmd->add_option("--face", face, "face frames (IDFV)")->required();
  infer_cmd->add_option("--source", source, "source WAV")->required();
  infer_cmd->add_option("--out", out, "output directory")->required();

  auto* interp_cmd = app.add_subcommand("interp", "speaker code for a blend of two faces");
  interp_cmd->add_option("--checkpoint", checkpoint, "checkpoint directory")->required();
  interp_cmd->add_option("--face-a", face_a, "face frames A (IDFV)")->required();
  interp_cmd->add_option("--face-b", face_b, "face frames B (IDFV)")->required();
  interp_cmd->add_option("--alpha", alpha, "blend weight of face B");
  interp_cmd->add_option("--source", source, "optional source WAV to convert");
  interp_cmd->add_option("--out", out, "output directory")->required();

  auto* eval_cmd = app.add_subcommand("eval", "score conversions for held-out faces");
  eval_cmd->add_option("--checkpoint", checkpoint, "checkpoint directory")->required();
  eval_cmd->add_option("--corpus", corpus_dir, "corpus directory")->required();
  eval_cmd->add_option("--out", out, "report path (JSON)")->required();

  auto* export_cmd = app.add_subcommand("export-mel-csv", "dump a mel IDFV file as CSV");
  export_cmd->add_option("--input", input, "mel IDFV file")->required();
  export_cmd->add_option("--out", out, "CSV path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitValidation;
  }

  try {
    if (*synth) {
      synth_corpus(out, resolve_config(common));
    } else if (*train_cmd) {
      const TrainConfig cfg = resolve_config(common);
      const TrainSummary s = train(cfg, load_corpus(corpus_dir), out, &std::cout);
      if (!s.epoch_mean_total.empty()) {
        std::cout << "epoch 1 mean " << s.epoch_mean_total.front() << ", final epoch mean "
                  << s.epoch_mean_total.back() << '\n';
      }
    } else if (*infer_cmd) {
      const LoadedModel m = load_model(checkpoint);
      write_conversion(out, infer(*m.model, m.config, read_idfv(face), dsp::read_wav(source)));
    } else if (*interp_cmd) {
      const LoadedModel m = load_model(checkpoint);
      const nn::Tensor code = interp_speaker_code(*m.model, read_idfv(face_a), read_idfv(face_b), alpha);
      fs::create_directories(out);
      write_idfv((fs::path(out) / "speaker_code.idfv").string(), code);
      if (!source.empty()) write_conversion(out, synthesize(*m.model, m.config, code, dsp::read_wav(source)));
    } else if (*eval_cmd) {
      const LoadedModel m = load_model(checkpoint);
      const std::string json = report_json(evaluate(*m.model, m.config, load_corpus(corpus_dir)));
      write_text_file(out, json);
      std::cout << json;
    } else if (*export_cmd) {
      write_text_file(out, mel_to_csv(read_idfv(input)));
    }
  } catch (const std::invalid_argument& e) {  // ValidationError, DimensionError
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const IoError& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return kExitIo;
  } catch (const NumericError& e) {
    std::cerr << "numeric error: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return kExitIo;
  }
  return 0;
}
