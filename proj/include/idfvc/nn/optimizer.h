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

#ifndef IDFVC_NN_OPTIMIZER_H_
#define IDFVC_NN_OPTIMIZER_H_

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "idfvc/nn/layers.h"

namespace idfvc::nn {

class Optimizer {
 public:
  virtual ~Optimizer() = default;
  // Applies one update from the accumulated gradients, then zeroes them.
  virtual void step() = 0;
  virtual void zero_grad() = 0;
};

class SgdMomentum : public Optimizer {
 public:
  SgdMomentum(ParameterRegistry& params, float lr, float momentum = 0.9f);
  void step() override;
  void zero_grad() override { params_.zero_grad(); }

 private:
  ParameterRegistry& params_;
  float lr_, momentum_;
  std::map<std::string, std::vector<float>> velocity_;
};

class Adam : public Optimizer {
 public:
  Adam(ParameterRegistry& params, float lr, float beta1 = 0.9f, float beta2 = 0.999f, float eps = 1e-8f);
  void step() override;
  void zero_grad() override { params_.zero_grad(); }

 private:
  ParameterRegistry& params_;
  float lr_, beta1_, beta2_, eps_;
  long step_count_ = 0;
  std::map<std::string, std::vector<float>> m_, v_;
};

std::unique_ptr<Optimizer> make_optimizer(const std::string& kind, ParameterRegistry& params, float lr);

}  // namespace idfvc::nn

#endif  // IDFVC_NN_OPTIMIZER_H_
