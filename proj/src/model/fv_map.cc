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

#include "idfvc/model/fv_map.h"

#include "idfvc/common/errors.h"
#include "idfvc/nn/ops.h"

namespace idfvc::model {

FvMap::FvMap(nn::ParameterRegistry& registry, const std::string& name, std::size_t slots, std::size_t dim,
             nn::Rng& rng)
    : keys(registry.add(name + ".keys", nn::xavier_uniform(slots, dim, rng))),
      values(registry.add(name + ".values", nn::xavier_uniform(slots, dim, rng))) {
  if (slots < 1) throw ValidationError("fv_map needs at least one memory slot");
}

nn::Tensor FvMap::forward(const nn::Tensor& f_query) const {
  if (f_query.rank() != 2 || f_query.dim(1) != keys.dim(1)) {
    throw DimensionError("fv_map: query " + nn::shape_to_string(f_query.shape()) + " vs memory " +
                         nn::shape_to_string(keys.shape()));
  }
  return nn::scaled_dot_attention(f_query, keys, values);
}

}  // namespace idfvc::model
