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

#include "idfvc/model/pitch_embedding.h"

#include <algorithm>

#include "idfvc/common/errors.h"
#include "idfvc/nn/ops.h"

namespace idfvc::model {

PitchEmbedding::PitchEmbedding(nn::ParameterRegistry& registry, const std::string& name, std::size_t bins,
                               std::size_t dim, float lo, float hi, nn::Rng& rng) {
  if (bins < 1) throw ValidationError("pitch embedding needs at least one bin");
  if (!(lo < hi)) throw ValidationError("pitch bin range must satisfy lo < hi");
  edges.resize(bins + 1);
  for (std::size_t i = 0; i <= bins; ++i) {
    edges[i] = lo + (hi - lo) * static_cast<float>(i) / static_cast<float>(bins);
  }
  table = registry.add(name, nn::uniform({bins + 1, dim}, -0.5f, 0.5f, rng));
}

std::size_t PitchEmbedding::bin_of(float value) const {
  // upper_bound puts a value sitting exactly on an edge into the higher bin.
  const auto it = std::upper_bound(edges.begin(), edges.end(), value);
  const std::size_t pos = static_cast<std::size_t>(it - edges.begin());
  if (pos == 0) return 0;
  return std::min(pos - 1, bins() - 1);
}

nn::Tensor pitch_embed(const std::vector<float>& normalized_log_f0, const std::vector<bool>& voiced,
                       const PitchEmbedding& embedding) {
  if (normalized_log_f0.size() != voiced.size()) {
    throw DimensionError("pitch_embed: " + std::to_string(normalized_log_f0.size()) + " values vs " +
                         std::to_string(voiced.size()) + " voicing flags");
  }
  std::vector<std::size_t> rows(voiced.size());
  for (std::size_t t = 0; t < rows.size(); ++t) {
    rows[t] = voiced[t] ? embedding.bin_of(normalized_log_f0[t]) : embedding.unvoiced_row();
  }
  return nn::gather_rows(embedding.table, rows);
}

}  // namespace idfvc::model
