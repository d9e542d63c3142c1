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

#include "idfvc/model/content.h"

#include "idfvc/common/errors.h"
#include "idfvc/nn/ops.h"

namespace idfvc::model {

using nn::Tensor;

Tensor stack_context(const Tensor& frames) {
  if (frames.rank() != 2) throw DimensionError("stack_context: expected [T x D], got " + nn::shape_to_string(frames.shape()));
  const std::size_t t = frames.dim(0);
  std::vector<std::size_t> prev(t), next(t);
  for (std::size_t i = 0; i < t; ++i) {
    prev[i] = i == 0 ? 0 : i - 1;
    next[i] = i + 1 == t ? i : i + 1;
  }
  return nn::concat({nn::gather_rows(frames, prev), frames, nn::gather_rows(frames, next)}, 1);
}

ContentEncoder::ContentEncoder(nn::ParameterRegistry& registry, const std::string& name, std::size_t mel_dim,
                               std::size_t hidden, std::size_t content_dim, nn::Rng& rng)
    : inner(registry, name + ".inner", 3 * mel_dim, hidden, rng),
      outer(registry, name + ".outer", hidden, content_dim, rng) {}

Tensor ContentEncoder::forward(const Tensor& mel) const {
  // Per-utterance mean removal: a static spectral envelope (the voice) is
  // dropped before content is encoded.
  const Tensor centered = nn::sub(mel, nn::broadcast_rows(nn::mean_axis(mel, 0), mel.dim(0)));
  return outer.forward(nn::tanh(inner.forward(stack_context(centered))));
}

Tensor infonce_loss(const Tensor& scores) {
  if (scores.rank() != 2 || scores.dim(0) != scores.dim(1)) {
    throw DimensionError("infonce_loss: scores must be square, got " + nn::shape_to_string(scores.shape()));
  }
  const std::size_t n = scores.dim(0);
  std::vector<float> eye(n * n, 0.0f);
  for (std::size_t i = 0; i < n; ++i) eye[i * n + i] = 1.0f;
  return nn::cross_entropy(scores, Tensor::from({n, n}, std::move(eye)));
}

CpcPredictors::CpcPredictors(nn::ParameterRegistry& registry, const std::string& name, std::size_t dim,
                             std::size_t steps, nn::Rng& rng) {
  if (steps < 1) throw ValidationError("cpc needs at least one prediction step");
  for (std::size_t k = 1; k <= steps; ++k) {
    weights.push_back(registry.add(name + ".w" + std::to_string(k), nn::xavier_uniform(dim, dim, rng)));
  }
}

Tensor cpc_loss(const std::vector<Tensor>& sequences, const CpcPredictors& predictors) {
  const std::size_t steps = predictors.steps();
  if (sequences.empty()) throw ValidationError("cpc_loss: empty batch");
  for (const Tensor& s : sequences) {
    if (s.rank() != 2 || s.dim(0) <= steps) {
      throw ValidationError("cpc_loss: sequence of shape " + nn::shape_to_string(s.shape()) +
                            " is not longer than " + std::to_string(steps) + " steps");
    }
  }
  Tensor total;
  for (std::size_t k = 1; k <= steps; ++k) {
    std::vector<Tensor> contexts, targets;
    for (const Tensor& s : sequences) {
      const std::size_t n = s.dim(0) - k;
      contexts.push_back(nn::slice_rows(s, 0, n));
      targets.push_back(nn::slice_rows(s, k, n));
    }
    Tensor ctx = nn::concat(contexts, 0);
    if (ctx.dim(0) < 2) throw ValidationError("cpc_loss: fewer than 2 candidates for negatives");
    Tensor pred = nn::matmul(ctx, predictors.weights[k - 1]);
    Tensor scores = nn::matmul(pred, nn::transpose(nn::concat(targets, 0)));
    Tensor term = infonce_loss(scores);
    total = total.defined() ? nn::add(total, term) : term;
  }
  return nn::scale(total, 1.0f / static_cast<float>(steps));
}

}  // namespace idfvc::model
