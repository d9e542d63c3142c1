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

#ifndef IDFVC_MODEL_FV_MAP_H_
#define IDFVC_MODEL_FV_MAP_H_

#include <string>

#include "idfvc/nn/layers.h"
#include "idfvc/nn/tensor.h"

namespace idfvc::model {

// Memory-based face-to-voice mapping: softmax(u K^T / sqrt(d)) V over M slots.
struct FvMap {
  FvMap() = default;
  FvMap(nn::ParameterRegistry& registry, const std::string& name, std::size_t slots, std::size_t dim,
        nn::Rng& rng);

  // f_query [N x d] -> speaker codes [N x d]
  nn::Tensor forward(const nn::Tensor& f_query) const;

  nn::Tensor keys;    // [M x d]
  nn::Tensor values;  // [M x d]
};

}  // namespace idfvc::model

#endif  // IDFVC_MODEL_FV_MAP_H_
