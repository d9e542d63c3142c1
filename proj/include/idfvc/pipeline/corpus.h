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

#ifndef IDFVC_PIPELINE_CORPUS_H_
#define IDFVC_PIPELINE_CORPUS_H_

#include <cstdint>
#include <string>
#include <vector>

#include "idfvc/dsp/audio.h"
#include "idfvc/nn/tensor.h"
#include "idfvc/pipeline/config.h"

namespace idfvc::pipeline {

// Voice parameters of a synthetic speaker, a fixed function of the anchor.
struct VoiceParams {
  double f0_hz = 150.0;
  double tilt = 1.0;  // harmonic h has amplitude h^-tilt before the formant envelope
};

VoiceParams voice_from_anchor(std::span<const float> anchor);

// The fixed 32-word vocabulary.
const std::vector<std::string>& vocabulary();

struct Utterance {
  std::string id;
  std::size_t speaker = 0;
  nn::Tensor face;   // [T_f x D_face]
  nn::Tensor mel;    // log-mel [T x D_mel]
  nn::Tensor pitch;  // [T x 2]: normalized log-F0, voiced flag
  std::vector<std::string> transcript;
  std::string wav_path;
};

struct Corpus {
  std::size_t speakers = 0;
  std::size_t face_dim = 0;
  nn::Tensor anchors;  // [K x D_face] ground-truth timbre vectors
  std::vector<Utterance> utterances;
};

// Writes K*M utterances (WAV, mel, face frames, pitch track) plus anchors.idfv
// and index.csv into `dir`. Output bytes depend only on the arguments.
void synth_corpus(const std::string& dir, std::uint64_t seed, std::size_t speakers,
                  std::size_t utterances_per_speaker, std::size_t face_frames, std::size_t face_dim,
                  std::size_t words_per_utterance, const dsp::StftConfig& stft);

// Convenience overload taking the corpus keys from a config.
void synth_corpus(const std::string& dir, const TrainConfig& config);

Corpus load_corpus(const std::string& dir);

// Utterance features straight from a waveform: log-mel and pitch track [T x 2].
nn::Tensor pitch_track(const dsp::Waveform& wave, const dsp::StftConfig& stft);

// Speakers held out for evaluation: the last max(2, ceil(fraction * K)).
// Requires at least 2 speakers left for training.
struct SpeakerSplit {
  std::vector<std::size_t> train, heldout;
  bool is_heldout(std::size_t speaker) const;
};
SpeakerSplit split_speakers(std::size_t speakers, float holdout_fraction);

}  // namespace idfvc::pipeline

#endif  // IDFVC_PIPELINE_CORPUS_H_
