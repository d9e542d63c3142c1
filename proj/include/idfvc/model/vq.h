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

#ifndef IDFVC_MODEL_VQ_H_
#define IDFVC_MODEL_VQ_H_

#include <cstdint>
#include <string>
#include <vector>

#include "idfvc/nn/layers.h"
#include "idfvc/nn/tensor.h"

namespace idfvc::model {

struct Codebook {
  Codebook() = default;
  // Random entries in [-0.5, 0.5], redrawn until no two rows are byte-identical.
  Codebook(nn::ParameterRegistry& registry, const std::string& name, std::size_t size, std::size_t dim,
           nn::Rng& rng);

  std::size_t size() const { return entries.defined() ? entries.dim(0) : 0; }
  std::size_t dim() const { return entries.dim(1); }

  nn::Tensor entries;  // [K x d]
};

struct VqResult {
  std::vector<std::size_t> indices;
  nn::Tensor quantized;      // codebook rows, gradient passed straight through to z
  nn::Tensor commitment;     // mean_t ||z_t - sg(q_t)||^2
  nn::Tensor codebook_loss;  // mean_t ||sg(z_t) - q_t||^2, trains the codebook
};

// Index of the nearest codeword per row of z (squared Euclidean, lowest index on ties).
std::vector<std::size_t> nearest_codes(const nn::Tensor& z, const nn::Tensor& entries);

VqResult vq_quantize(const nn::Tensor& z, const Codebook& codebook);

}  // namespace idfvc::model

#endif  // IDFVC_MODEL_VQ_H_
