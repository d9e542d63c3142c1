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

#include "idfvc/nn/layers.h"

#include <cmath>

#include "idfvc/common/errors.h"
#include "idfvc/nn/ops.h"

namespace idfvc::nn {

Tensor xavier_uniform(std::size_t fan_in, std::size_t fan_out, Rng& rng) {
  const float bound = std::sqrt(6.0f / static_cast<float>(fan_in + fan_out));
  return uniform({fan_in, fan_out}, -bound, bound, rng, true);
}

Tensor uniform(const Shape& shape, float lo, float hi, Rng& rng, bool requires_grad) {
  std::uniform_real_distribution<float> dist(lo, hi);
  std::vector<float> values(shape_numel(shape));
  for (float& v : values) v = dist(rng);
  return Tensor::from(shape, std::move(values), requires_grad);
}

Tensor randn(const Shape& shape, float stddev, Rng& rng, bool requires_grad) {
  std::normal_distribution<float> dist(0.0f, stddev);
  std::vector<float> values(shape_numel(shape));
  for (float& v : values) v = dist(rng);
  return Tensor::from(shape, std::move(values), requires_grad);
}

Tensor& ParameterRegistry::add(const std::string& name, Tensor tensor) {
  if (params_.count(name)) throw ValidationError("parameter '" + name + "' registered twice");
  tensor.set_requires_grad(true);
  return params_.emplace(name, std::move(tensor)).first->second;
}

Tensor& ParameterRegistry::at(const std::string& name) {
  auto it = params_.find(name);
  if (it == params_.end()) throw ValidationError("unknown parameter '" + name + "'");
  return it->second;
}

const Tensor& ParameterRegistry::at(const std::string& name) const {
  auto it = params_.find(name);
  if (it == params_.end()) throw ValidationError("unknown parameter '" + name + "'");
  return it->second;
}

std::size_t ParameterRegistry::total_elements() const {
  std::size_t n = 0;
  for (const auto& [name, t] : params_) n += t.numel();
  return n;
}

void ParameterRegistry::zero_grad() {
  for (auto& [name, t] : params_) t.zero_grad();
}

void ParameterRegistry::copy_values_from(const ParameterRegistry& other) {
  for (auto& [name, t] : params_) {
    if (!other.contains(name)) continue;
    const Tensor& src = other.at(name);
    if (src.shape() != t.shape()) {
      throw DimensionError("parameter '" + name + "': " + shape_to_string(t.shape()) + " vs " +
                           shape_to_string(src.shape()));
    }
    std::copy(src.data().begin(), src.data().end(), t.mutable_data().begin());
  }
}

LinearLayer::LinearLayer(ParameterRegistry& registry, const std::string& name, std::size_t in,
                         std::size_t out, Rng& rng)
    : weight(registry.add(name + ".weight", xavier_uniform(in, out, rng))),
      bias(registry.add(name + ".bias", Tensor::zeros({out}))) {}

Tensor LinearLayer::forward(const Tensor& x) const {
  if (x.rank() != 2 || x.dim(1) != weight.dim(0)) {
    throw DimensionError("linear: input " + shape_to_string(x.shape()) + " vs weight " +
                         shape_to_string(weight.shape()));
  }
  return add(matmul(x, weight), bias);
}

}  // namespace idfvc::nn
