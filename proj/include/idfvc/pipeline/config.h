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

#ifndef IDFVC_PIPELINE_CONFIG_H_
#define IDFVC_PIPELINE_CONFIG_H_

#include <cstdint>
#include <string>

#include "idfvc/dsp/audio.h"
#include "idfvc/losses/losses.h"
#include "idfvc/model/config.h"

namespace idfvc::pipeline {

// Everything a run needs, read from a flat key=value file. The same keys
// drive corpus synthesis, training, inference and evaluation.
struct TrainConfig {
  std::uint64_t seed = 1;

  // corpus
  std::size_t utterances_per_speaker = 50;  // M; the speaker count lives in model.speakers
  std::size_t face_frames = 8;
  std::size_t words_per_utterance = 3;

  // optimization
  std::size_t epochs = 30;
  std::size_t batch_size = 16;
  float learning_rate = 2e-2f;
  std::string optimizer = "adam";
  std::size_t q_steps = 5;
  float q_learning_rate = 1e-3f;
  float tau = 0.07f;
  float cpc_weight = 0.1f;
  float commitment_weight = 0.25f;
  float holdout_fraction = 0.2f;

  // synthesis
  std::size_t griffin_lim_iters = 60;

  losses::LossWeights weights;
  model::ModelConfig model;
  dsp::StftConfig stft;

  void validate() const;  // ValidationError on a bad value
};

// Parses key=value lines; '#' starts a comment. Unknown or repeated keys and
// unparsable values raise ValidationError naming the line.
TrainConfig parse_config(const std::string& text, const std::string& origin = "config");
TrainConfig load_config(const std::string& path);

// Serializes every key so that parse_config(format_config(c)) reproduces c.
std::string format_config(const TrainConfig& config);

}  // namespace idfvc::pipeline

#endif  // IDFVC_PIPELINE_CONFIG_H_
