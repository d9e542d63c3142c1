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

#include "idfvc/model/vq.h"

#include <cstring>
#include <limits>

#include "idfvc/common/errors.h"
#include "idfvc/nn/ops.h"

namespace idfvc::model {

using nn::Tensor;

namespace {

bool has_duplicate_rows(const Tensor& t) {
  const std::size_t k = t.dim(0), d = t.dim(1);
  const float* p = t.data().data();
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = i + 1; j < k; ++j)
      if (std::memcmp(p + i * d, p + j * d, d * sizeof(float)) == 0) return true;
  return false;
}

// mean over rows of the squared row distance
Tensor mean_row_sq(const Tensor& a, const Tensor& b) {
  return nn::scale(nn::sum(nn::square(nn::sub(a, b))), 1.0f / static_cast<float>(a.dim(0)));
}

}  // namespace

Codebook::Codebook(nn::ParameterRegistry& registry, const std::string& name, std::size_t size,
                   std::size_t dim, nn::Rng& rng) {
  if (size < 2) throw ValidationError("codebook needs at least 2 entries, got " + std::to_string(size));
  Tensor init = nn::uniform({size, dim}, -0.5f, 0.5f, rng);
  while (has_duplicate_rows(init)) init = nn::uniform({size, dim}, -0.5f, 0.5f, rng);
  entries = registry.add(name, init);
}

std::vector<std::size_t> nearest_codes(const Tensor& z, const Tensor& entries) {
  const std::size_t t = z.dim(0), d = z.dim(1), k = entries.dim(0);
  const float* zp = z.data().data();
  const float* cp = entries.data().data();
  std::vector<std::size_t> out(t);
  for (std::size_t i = 0; i < t; ++i) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t best_j = 0;
    for (std::size_t j = 0; j < k; ++j) {
      double dist = 0.0;
      for (std::size_t c = 0; c < d; ++c) {
        const double diff = static_cast<double>(zp[i * d + c]) - cp[j * d + c];
        dist += diff * diff;
      }
      if (dist < best) {
        best = dist;
        best_j = j;
      }
    }
    out[i] = best_j;
  }
  return out;
}

VqResult vq_quantize(const Tensor& z, const Codebook& codebook) {
  if (codebook.size() == 0) throw ValidationError("vq_quantize: empty codebook");
  if (z.rank() != 2 || z.dim(1) != codebook.dim()) {
    throw DimensionError("vq_quantize: z " + nn::shape_to_string(z.shape()) + " vs codebook " +
                         nn::shape_to_string(codebook.entries.shape()));
  }
  VqResult r;
  r.indices = nearest_codes(z, codebook.entries);
  Tensor q = nn::gather_rows(codebook.entries, r.indices);
  r.quantized = nn::straight_through(z, q.detach());
  r.commitment = mean_row_sq(z, q.detach());
  r.codebook_loss = mean_row_sq(q, z.detach());
  return r;
}

}  // namespace idfvc::model
