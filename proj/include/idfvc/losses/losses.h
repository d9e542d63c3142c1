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

#ifndef IDFVC_LOSSES_LOSSES_H_
#define IDFVC_LOSSES_LOSSES_H_

#include <string>
#include <vector>

#include "idfvc/nn/layers.h"
#include "idfvc/nn/optimizer.h"
#include "idfvc/nn/tensor.h"

namespace idfvc::losses {

// Weights of the total objective; L_rec has an implicit weight of 1.
struct LossWeights {
  float con = 0.1f;  // lambda1
  float mi = 0.01f;  // lambda2
  float idf = 0.1f;  // lambda3
  float ids = 0.1f;  // lambda4
  float fv = 1.0f;   // lambda5

  void validate() const;  // finite and nonnegative
};

// Per-sample speaker ids in [0, classes).
struct SpeakerLabels {
  SpeakerLabels() = default;
  SpeakerLabels(std::vector<std::size_t> ids, std::size_t classes);

  std::size_t size() const { return ids.size(); }
  nn::Tensor one_hot() const;          // [N x C]
  nn::Tensor same_speaker() const;     // [N x N], y_ij

  std::vector<std::size_t> ids;
  std::size_t classes = 0;
};

// -(1/N) sum_i sum_j y_ij log softmax_j(cos(face_i, speech_j) / tau)
nn::Tensor contrastive_loss(const nn::Tensor& face, const nn::Tensor& speech, const SpeakerLabels& labels,
                            float tau = 0.07f);

// Cross-entropy of head(features) against the labels.
nn::Tensor id_supervision_loss(const nn::Tensor& features, const nn::LinearLayer& head, const SpeakerLabels& labels);

struct GaussianParams {
  nn::Tensor mean;    // [N x d_con]
  nn::Tensor logvar;  // [N x d_con], clamped to [-8, 8]
};

// q(con | spk): diagonal Gaussian whose mean and log-variance come from two
// two-layer heads over F_spk.
struct VariationalNet {
  VariationalNet() = default;
  VariationalNet(nn::ParameterRegistry& registry, const std::string& name, std::size_t spk_dim, std::size_t con_dim,
                 std::size_t hidden, nn::Rng& rng);

  GaussianParams forward(const nn::Tensor& spk) const;

  nn::LinearLayer mean_hidden, mean_out, logvar_hidden, logvar_out;
  static constexpr float kLogvarLimit = 8.0f;
};

// Matrix of log q(con_j | spk_i) without the constant -d/2 log(2 pi): [N x N],
// where row i of `q_spk` holds the Gaussian predicted from spk_i.
nn::Tensor conditional_log_density(const GaussianParams& q_spk, const nn::Tensor& con);

// (1/N^2) sum_i sum_j [log q(con_i | spk_i) - log q(con_j | spk_i)]
nn::Tensor club_mi_upper(const GaussianParams& q_spk, const nn::Tensor& con);
nn::Tensor club_mi_upper(const nn::Tensor& spk, const nn::Tensor& con, const VariationalNet& q);

// mean_i -log q(con_i | spk_i)
nn::Tensor qnet_nll(const GaussianParams& q_spk, const nn::Tensor& con);
nn::Tensor qnet_nll(const nn::Tensor& spk, const nn::Tensor& con, const VariationalNet& q);

// Runs `steps` optimizer steps on qnet_nll with spk and con held fixed
// (detached). `opt` must own exactly q's parameters. Returns the last NLL.
float fit_qnet(const VariationalNet& q, nn::Optimizer& opt, const nn::Tensor& spk, const nn::Tensor& con,
               std::size_t steps);

// Mean squared error over all elements.
nn::Tensor recon_loss(const nn::Tensor& mel, const nn::Tensor& mel_hat);

// MSE(mapped, sg(target)) + mean over different-speaker pairs i < j of
// max(0, margin - ||mapped_i - mapped_j||).
nn::Tensor fv_mapping_loss(const nn::Tensor& mapped, const nn::Tensor& target, const SpeakerLabels& labels,
                           float margin = 1.0f);

struct LossTerms {
  nn::Tensor rec, con, mi, idf, ids, fv;
};

// L_rec + l1 L_con + l2 L_MI + l3 L_id-f + l4 L_id-s + l5 L_F. NumericError names
// the first non-finite term.
nn::Tensor total_loss(const LossTerms& parts, const LossWeights& w);

}  // namespace idfvc::losses

#endif  // IDFVC_LOSSES_LOSSES_H_
