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

#include "idfvc/pipeline/corpus.h"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <numbers>
#include <random>
#include <sstream>

#include "idfvc/common/errors.h"
#include "idfvc/dsp/pitch.h"
#include "idfvc/dsp/spectral.h"
#include "idfvc/pipeline/idfv.h"

namespace idfvc::pipeline {

namespace fs = std::filesystem;

namespace {

constexpr double kWordSeconds = 0.2;
constexpr double kFaceNoise = 0.3;
constexpr double kMaxAnchorCosine = 0.5;
constexpr double kPeak = 0.5;

struct Formants {
  double f1, f2;
};

// Word w sits on a 4 x 8 grid of (F1, F2) pairs.
Formants formants_of(std::size_t w) { return {300.0 + 170.0 * (w % 4), 900.0 + 200.0 * (w / 4)}; }

double formant_envelope(double f, const Formants& fm) {
  const double a = (f - fm.f1) / 100.0, b = (f - fm.f2) / 150.0;
  return 0.02 + std::exp(-a * a) + 0.8 * std::exp(-b * b);
}

double row_cosine(const std::vector<double>& a, const std::vector<double>& b) {
  double ab = 0, aa = 0, bb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ab += a[i] * b[i];
    aa += a[i] * a[i];
    bb += b[i] * b[i];
  }
  return ab / std::sqrt(aa * bb);
}

// Gaussian anchors, each redrawn until its cosine with every earlier anchor is
// below kMaxAnchorCosine.
std::vector<std::vector<double>> sample_anchors(std::size_t k, std::size_t dim, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<std::vector<double>> anchors;
  for (std::size_t s = 0; s < k; ++s) {
    for (int attempt = 0;; ++attempt) {
      if (attempt == 10000) throw ValidationError("could not draw well separated speaker anchors");
      std::vector<double> a(dim);
      for (double& v : a) v = normal(rng);
      const bool separated = std::all_of(anchors.begin(), anchors.end(),
                                         [&](const auto& b) { return row_cosine(a, b) < kMaxAnchorCosine; });
      if (separated) {
        anchors.push_back(std::move(a));
        break;
      }
    }
  }
  return anchors;
}

dsp::Waveform synthesize(const VoiceParams& voice, const std::vector<std::size_t>& words, double jitter,
                         int sample_rate) {
  const std::size_t per_word = static_cast<std::size_t>(kWordSeconds * sample_rate);
  dsp::Waveform wave;
  wave.sample_rate = sample_rate;
  wave.samples.resize(per_word * words.size());
  const double nyquist_guard = 0.95 * sample_rate / 2.0;
  double phase = 0.0;  // fundamental phase, continuous across words
  for (std::size_t w = 0; w < words.size(); ++w) {
    const Formants fm = formants_of(words[w]);
    const double glide = (static_cast<double>(words[w] % 3) - 1.0) * 0.08;
    for (std::size_t n = 0; n < per_word; ++n) {
      const double u = static_cast<double>(n) / per_word - 0.5;
      const double f0 = voice.f0_hz * jitter * (1.0 + glide * u);
      phase += 2.0 * std::numbers::pi * f0 / sample_rate;
      double s = 0.0;
      for (int h = 1; h * f0 < nyquist_guard; ++h) {
        s += std::pow(h, -voice.tilt) * formant_envelope(h * f0, fm) * std::sin(h * phase);
      }
      wave.samples[w * per_word + n] = static_cast<float>(s);
    }
  }
  float peak = 0.0f;
  for (float v : wave.samples) peak = std::max(peak, std::abs(v));
  if (peak > 0.0f) {
    for (float& v : wave.samples) v = static_cast<float>(v * kPeak / peak);
  }
  return wave;
}

std::string utterance_id(std::size_t speaker, std::size_t index) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "s%02zu_u%03zu", speaker, index);
  return buf;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) out.push_back(field);
  return out;
}

}  // namespace

VoiceParams voice_from_anchor(std::span<const float> anchor) {
  const std::size_t half = anchor.size() / 2;
  if (half == 0) throw ValidationError("voice_from_anchor: anchor needs at least 2 values");
  double s1 = 0.0, s2 = 0.0;
  for (std::size_t i = 0; i < half; ++i) s1 += anchor[i];
  for (std::size_t i = half; i < 2 * half; ++i) s2 += anchor[i];
  s1 /= std::sqrt(static_cast<double>(half));
  s2 /= std::sqrt(static_cast<double>(half));
  return {150.0 * std::pow(2.0, 0.5 * std::tanh(s1)), 1.0 + 0.5 * std::tanh(s2)};
}

const std::vector<std::string>& vocabulary() {
  static const std::vector<std::string> words = {
      "able", "bird", "cold", "door", "east", "fish", "gold", "hand", "iron", "jump", "kind",
      "lamp", "moon", "nose", "open", "park", "quiet", "rain", "salt", "tree", "upon", "vast",
      "wind", "yard", "zero", "blue", "calm", "deep", "farm", "glass", "hill", "milk"};
  return words;
}

nn::Tensor pitch_track(const dsp::Waveform& wave, const dsp::StftConfig& stft) {
  const dsp::F0Track f0 = dsp::extract_f0(wave, stft);
  const std::size_t t = f0.f0_hz.size();
  std::vector<float> values(2 * t);
  for (std::size_t i = 0; i < t; ++i) {
    values[2 * i] = f0.normalized_log_f0[i];
    values[2 * i + 1] = f0.voiced[i] ? 1.0f : 0.0f;
  }
  if (t == 0) throw ValidationError("pitch_track: waveform shorter than one analysis window");
  return nn::Tensor::from({t, 2}, std::move(values));
}

void synth_corpus(const std::string& dir, std::uint64_t seed, std::size_t speakers,
                  std::size_t utterances_per_speaker, std::size_t face_frames, std::size_t face_dim,
                  std::size_t words_per_utterance, const dsp::StftConfig& stft) {
  if (speakers < 2) throw ValidationError("synth_corpus: need K >= 2 speakers");
  if (utterances_per_speaker < 1) throw ValidationError("synth_corpus: need M >= 1 utterances per speaker");
  if (face_frames < 1 || face_dim < 2 || words_per_utterance < 1) {
    throw ValidationError("synth_corpus: face frames, face width and words per utterance must be positive");
  }
  stft.validate();
  fs::create_directories(dir);
  std::mt19937_64 rng(seed);
  const auto anchors = sample_anchors(speakers, face_dim, rng);

  std::vector<float> flat;
  for (const auto& a : anchors) flat.insert(flat.end(), a.begin(), a.end());
  const nn::Tensor anchor_tensor = nn::Tensor::from({speakers, face_dim}, flat);
  write_idfv((fs::path(dir) / "anchors.idfv").string(), anchor_tensor);

  std::normal_distribution<double> noise(0.0, kFaceNoise);
  std::uniform_int_distribution<std::size_t> pick_word(0, vocabulary().size() - 1);
  std::uniform_real_distribution<double> pick_jitter(0.97, 1.03);

  std::ostringstream index;
  index << "id,speaker,wav,mel,face,pitch,transcript\n";
  for (std::size_t s = 0; s < speakers; ++s) {
    const VoiceParams voice = voice_from_anchor(anchor_tensor.data().subspan(s * face_dim, face_dim));
    for (std::size_t u = 0; u < utterances_per_speaker; ++u) {
      const std::string id = utterance_id(s, u);
      std::vector<float> face(face_frames * face_dim);
      for (std::size_t f = 0; f < face_frames; ++f) {
        for (std::size_t d = 0; d < face_dim; ++d) {
          face[f * face_dim + d] = static_cast<float>(anchors[s][d] + noise(rng));
        }
      }
      std::vector<std::size_t> words(words_per_utterance);
      for (auto& w : words) w = pick_word(rng);
      const double jitter = pick_jitter(rng);

      const dsp::Waveform wave = synthesize(voice, words, jitter, stft.sample_rate);
      const fs::path base = fs::path(dir) / id;
      dsp::write_wav(base.string() + ".wav", wave);
      // Features are computed from the stored 16-bit audio so that they match
      // what a reader of the WAV file would see.
      const dsp::Waveform stored = dsp::read_wav(base.string() + ".wav");
      write_idfv(base.string() + ".mel.idfv", dsp::mel_spectrogram(stored, stft));
      write_idfv(base.string() + ".face.idfv", nn::Tensor::from({face_frames, face_dim}, std::move(face)));
      write_idfv(base.string() + ".pitch.idfv", pitch_track(stored, stft));

      std::string transcript;
      for (std::size_t i = 0; i < words.size(); ++i) transcript += (i ? " " : "") + vocabulary()[words[i]];
      index << id << ',' << s << ',' << id << ".wav," << id << ".mel.idfv," << id << ".face.idfv," << id
            << ".pitch.idfv," << transcript << '\n';
    }
  }
  write_text_file((fs::path(dir) / "index.csv").string(), index.str());
}

void synth_corpus(const std::string& dir, const TrainConfig& c) {
  synth_corpus(dir, c.seed, c.model.speakers, c.utterances_per_speaker, c.face_frames, c.model.face_dim,
               c.words_per_utterance, c.stft);
}

Corpus load_corpus(const std::string& dir) {
  Corpus corpus;
  corpus.anchors = read_idfv((fs::path(dir) / "anchors.idfv").string());
  if (corpus.anchors.rank() != 2) throw ValidationError(dir + ": anchors.idfv must be [K x D]");
  corpus.speakers = corpus.anchors.dim(0);
  corpus.face_dim = corpus.anchors.dim(1);

  const std::string index_path = (fs::path(dir) / "index.csv").string();
  std::istringstream in(read_text_file(index_path));
  std::string line;
  std::getline(in, line);
  if (line != "id,speaker,wav,mel,face,pitch,transcript") throw ValidationError(index_path + ": bad header");
  for (std::size_t lineno = 2; std::getline(in, line); ++lineno) {
    if (line.empty()) continue;
    const std::string where = index_path + ":" + std::to_string(lineno);
    const auto f = split_csv(line);
    if (f.size() != 7) throw ValidationError(where + ": expected 7 fields");
    Utterance u;
    u.id = f[0];
    try {
      std::size_t used = 0;
      u.speaker = std::stoul(f[1], &used);
      if (used != f[1].size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw ValidationError(where + ": bad speaker id '" + f[1] + "'");
    }
    if (u.speaker >= corpus.speakers) {
      throw ValidationError(where + ": speaker " + f[1] + " outside [0, " + std::to_string(corpus.speakers) + ")");
    }
    u.wav_path = (fs::path(dir) / f[2]).string();
    u.mel = read_idfv((fs::path(dir) / f[3]).string());
    u.face = read_idfv((fs::path(dir) / f[4]).string());
    u.pitch = read_idfv((fs::path(dir) / f[5]).string());
    std::istringstream words(f[6]);
    for (std::string w; words >> w;) u.transcript.push_back(w);
    if (u.face.rank() != 2 || u.face.dim(1) != corpus.face_dim) {
      throw ValidationError(where + ": face frames do not have width " + std::to_string(corpus.face_dim));
    }
    if (u.mel.rank() != 2 || u.pitch.rank() != 2 || u.pitch.dim(1) != 2 || u.pitch.dim(0) != u.mel.dim(0)) {
      throw ValidationError(where + ": mel and pitch track disagree on frame count");
    }
    corpus.utterances.push_back(std::move(u));
  }
  if (corpus.utterances.empty()) throw ValidationError(index_path + ": no utterances");
  return corpus;
}

bool SpeakerSplit::is_heldout(std::size_t speaker) const {
  return std::find(heldout.begin(), heldout.end(), speaker) != heldout.end();
}

SpeakerSplit split_speakers(std::size_t speakers, float holdout_fraction) {
  // The slack keeps 0.2f * 20 (4.0000001 in float) at 4 speakers.
  const auto wanted =
      static_cast<std::size_t>(std::ceil(static_cast<double>(holdout_fraction) * static_cast<double>(speakers) - 1e-6));
  const std::size_t held = std::max<std::size_t>(2, wanted);
  if (speakers < held + 2) {
    throw ValidationError("need at least " + std::to_string(held + 2) + " speakers for " + std::to_string(held) +
                          " held-out and 2 training speakers");
  }
  SpeakerSplit split;
  for (std::size_t s = 0; s < speakers; ++s) (s + held < speakers ? split.train : split.heldout).push_back(s);
  return split;
}

}  // namespace idfvc::pipeline
