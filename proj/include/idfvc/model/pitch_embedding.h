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

#ifndef IDFVC_MODEL_PITCH_EMBEDDING_H_
#define IDFVC_MODEL_PITCH_EMBEDDING_H_

#include <string>
#include <vector>

#include "idfvc/nn/layers.h"
#include "idfvc/nn/tensor.h"

namespace idfvc::model {

// Quantized pitch lookup. Bins split [lo, hi] evenly over normalized log-F0;
// row N_bins of the table is the unvoiced row.
struct PitchEmbedding {
  PitchEmbedding() = default;
  PitchEmbedding(nn::ParameterRegistry& registry, const std::string& name, std::size_t bins, std::size_t dim,
                 float lo, float hi, nn::Rng& rng);

  std::size_t bins() const { return edges.size() - 1; }
  std::size_t unvoiced_row() const { return bins(); }

  // Bin i covers [edges[i], edges[i+1]); values outside [lo, hi) clamp to the end bins.
  std::size_t bin_of(float value) const;

  nn::Tensor table;          // [(N_bins + 1) x d_pitch]
  std::vector<float> edges;  // N_bins + 1 strictly increasing values
};

// [T x d_pitch]: voiced frames take their bin's row, unvoiced ones the unvoiced row.
nn::Tensor pitch_embed(const std::vector<float>& normalized_log_f0, const std::vector<bool>& voiced,
                       const PitchEmbedding& embedding);

}  // namespace idfvc::model

#endif  // IDFVC_MODEL_PITCH_EMBEDDING_H_
