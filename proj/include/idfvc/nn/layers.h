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

#ifndef IDFVC_NN_LAYERS_H_
#define IDFVC_NN_LAYERS_H_

#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "idfvc/nn/tensor.h"

namespace idfvc::nn {

using Rng = std::mt19937_64;

Tensor xavier_uniform(std::size_t fan_in, std::size_t fan_out, Rng& rng);
Tensor uniform(const Shape& shape, float lo, float hi, Rng& rng, bool requires_grad = false);
Tensor randn(const Shape& shape, float stddev, Rng& rng, bool requires_grad = false);

// Named trainable tensors, iterated in name order.
class ParameterRegistry {
 public:
  // Registers `tensor` under `name`, marking it trainable. Throws on duplicates.
  Tensor& add(const std::string& name, Tensor tensor);

  bool contains(const std::string& name) const { return params_.count(name) != 0; }
  Tensor& at(const std::string& name);
  const Tensor& at(const std::string& name) const;
  std::size_t size() const { return params_.size(); }
  std::size_t total_elements() const;

  std::map<std::string, Tensor>::iterator begin() { return params_.begin(); }
  std::map<std::string, Tensor>::iterator end() { return params_.end(); }
  std::map<std::string, Tensor>::const_iterator begin() const { return params_.begin(); }
  std::map<std::string, Tensor>::const_iterator end() const { return params_.end(); }

  void zero_grad();
  // Copies values from `other` for every shared name; shapes must agree.
  void copy_values_from(const ParameterRegistry& other);

 private:
  std::map<std::string, Tensor> params_;
};

struct LinearLayer {
  LinearLayer() = default;
  LinearLayer(ParameterRegistry& registry, const std::string& name, std::size_t in, std::size_t out,
              Rng& rng);

  // x: [rows x in] -> [rows x out]
  Tensor forward(const Tensor& x) const;

  std::size_t in_features() const { return weight.dim(0); }
  std::size_t out_features() const { return weight.dim(1); }

  Tensor weight;  // [in x out]
  Tensor bias;    // [out]
};

}  // namespace idfvc::nn

#endif  // IDFVC_NN_LAYERS_H_
