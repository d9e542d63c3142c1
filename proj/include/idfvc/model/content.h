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

#ifndef IDFVC_MODEL_CONTENT_H_
#define IDFVC_MODEL_CONTENT_H_

#include <string>
#include <vector>

#include "idfvc/nn/layers.h"
#include "idfvc/nn/tensor.h"

namespace idfvc::model {

// Stacks each frame with its left and right neighbours (edges replicated):
// [T x D] -> [T x 3D].
nn::Tensor stack_context(const nn::Tensor& frames);

// Frame-wise content encoder over +-1 frames of context, producing the
// pre-quantization sequence z.
struct ContentEncoder {
  ContentEncoder() = default;
  ContentEncoder(nn::ParameterRegistry& registry, const std::string& name, std::size_t mel_dim,
                 std::size_t hidden, std::size_t content_dim, nn::Rng& rng);

  nn::Tensor forward(const nn::Tensor& mel) const;  // [T x D_mel] -> [T x d_con]

  nn::LinearLayer inner, outer;
};

// InfoNCE over a score matrix whose diagonal holds the positives:
// -(1/N) sum_i log softmax(scores_i)_i.
nn::Tensor infonce_loss(const nn::Tensor& scores);

// One bias-free linear predictor per horizon k = 1..steps.
struct CpcPredictors {
  CpcPredictors() = default;
  CpcPredictors(nn::ParameterRegistry& registry, const std::string& name, std::size_t dim, std::size_t steps,
                nn::Rng& rng);

  std::size_t steps() const { return weights.size(); }

  std::vector<nn::Tensor> weights;  // [d x d] each
};

// Mean over horizons of InfoNCE where z_t W_k predicts z_{t+k}; candidates are
// the targets of every (sequence, t) pair in the batch. Every sequence must be
// longer than the horizon count and the batch must provide at least 2 candidates.
nn::Tensor cpc_loss(const std::vector<nn::Tensor>& sequences, const CpcPredictors& predictors);

}  // namespace idfvc::model

#endif  // IDFVC_MODEL_CONTENT_H_
