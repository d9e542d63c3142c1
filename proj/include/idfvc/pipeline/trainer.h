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

#ifndef IDFVC_PIPELINE_TRAINER_H_
#define IDFVC_PIPELINE_TRAINER_H_

#include <map>
#include <memory>
#include <ostream>
#include <string>
#include <vector>

#include "idfvc/losses/losses.h"
#include "idfvc/model/id_facevc.h"
#include "idfvc/nn/optimizer.h"
#include "idfvc/pipeline/config.h"
#include "idfvc/pipeline/corpus.h"

namespace idfvc::pipeline {

// Model-side view of one utterance; everything here is constant during training.
struct PreparedUtterance {
  std::size_t speaker = 0;
  nn::Tensor face_mean;  // [1 x D_face]
  nn::Tensor mel_norm;   // [T x D_mel]
  std::vector<float> log_f0;
  std::vector<bool> voiced;
};

// mel_norm uses the model's mel scaler, so prepare after the scaler is set.
PreparedUtterance prepare(const Utterance& u, const model::IdFaceVc& model);

struct StepLosses {
  double rec = 0, con = 0, mi = 0, idf = 0, ids = 0, fv = 0, total = 0;
};

// Owns the model, the variational network and both optimizers. Each step first
// fits q(con | spk) for q_steps on detached codes, then takes one gradient step
// on the weighted total plus the content encoder's CPC and VQ terms.
//
// The speaker code paired with an utterance is computed from another,
// randomly drawn utterance of the same speaker. Taken from the utterance
// itself it summarizes that utterance's words, and the decoder learns to
// reconstruct from it alone while the content code collapses.
//
// Mel statistics are fitted on the training speakers' utterances before the
// first step and stored in the model.
//
// The codebook starts as a random sample of encoder outputs on training frames,
// and codes left unused by the end of an epoch are re-seeded the same way;
// with the fixed uniform initialization every frame snaps to one code.

class Trainer {
 public:
  Trainer(const TrainConfig& config, const Corpus& corpus);

  StepLosses step(const std::vector<std::size_t>& batch);  // indices into train_set()
  std::vector<StepLosses> run_epoch(std::size_t epoch);

  model::IdFaceVc& model() { return *model_; }
  const losses::VariationalNet& qnet() const { return q_; }
  nn::ParameterRegistry& qnet_params() { return q_params_; }
  const std::vector<PreparedUtterance>& train_set() const { return train_; }
  const std::vector<PreparedUtterance>& heldout_set() const { return heldout_; }
  const SpeakerSplit& split() const { return split_; }
  const TrainConfig& config() const { return config_; }

 private:
  TrainConfig config_;
  SpeakerSplit split_;
  std::vector<PreparedUtterance> train_, heldout_;
  std::unique_ptr<model::IdFaceVc> model_;
  nn::ParameterRegistry q_params_;
  losses::VariationalNet q_;
  std::unique_ptr<nn::Optimizer> opt_, q_opt_;
  nn::Rng shuffle_rng_;
  std::map<std::size_t, std::vector<std::size_t>> by_speaker_;  // speaker -> indices into train_

  std::size_t reference_for(std::size_t index);
  std::size_t reseed_codes(bool all);  // returns the number of codes replaced
};

// Speaker codes [N x d_spk] and time-pooled pre-quantization content codes
// [N x d_con] of the given utterances.
struct Codes {
  nn::Tensor spk, con;
};
Codes encode_codes(const model::IdFaceVc& model, const std::vector<PreparedUtterance>& utts);

// Fits a fresh, seeded q-net on fixed codes and returns club_mi_upper.
double refit_club(const Codes& codes, std::size_t hidden, std::uint64_t seed, std::size_t steps = 500,
                  float lr = 1e-2f);

struct TrainSummary {
  std::vector<double> epoch_mean_total;
  StepLosses last_step;
};

// Runs config.epochs epochs. Writes out_dir/losses.csv, a checkpoint per epoch
// under out_dir/epochs/NNN and the final one under out_dir/checkpoint (each
// with its config.txt). `log`, when given, receives one line per epoch.
TrainSummary train(const TrainConfig& config, const Corpus& corpus, const std::string& out_dir,
                   std::ostream* log = nullptr);

// Writes a checkpoint directory that load_model() can rebuild on its own.
void save_model(const std::string& dir, const TrainConfig& config, const model::IdFaceVc& model);
struct LoadedModel {
  TrainConfig config;
  std::unique_ptr<model::IdFaceVc> model;
};
LoadedModel load_model(const std::string& dir);

}  // namespace idfvc::pipeline

#endif  // IDFVC_PIPELINE_TRAINER_H_
