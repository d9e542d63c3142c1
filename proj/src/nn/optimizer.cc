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

#include "idfvc/nn/optimizer.h"

#include <cmath>

#include "idfvc/common/errors.h"

namespace idfvc::nn {

SgdMomentum::SgdMomentum(ParameterRegistry& params, float lr, float momentum)
    : params_(params), lr_(lr), momentum_(momentum) {
  for (auto& [name, t] : params_) velocity_[name].assign(t.numel(), 0.0f);
}

void SgdMomentum::step() {
  for (auto& [name, t] : params_) {
    if (!t.has_grad()) continue;
    auto& vel = velocity_[name];
    auto g = t.grad();
    auto w = t.mutable_data();
    for (std::size_t i = 0; i < w.size(); ++i) {
      vel[i] = momentum_ * vel[i] + g[i];
      w[i] -= lr_ * vel[i];
    }
  }
  params_.zero_grad();
}

Adam::Adam(ParameterRegistry& params, float lr, float beta1, float beta2, float eps)
    : params_(params), lr_(lr), beta1_(beta1), beta2_(beta2), eps_(eps) {
  for (auto& [name, t] : params_) {
    m_[name].assign(t.numel(), 0.0f);
    v_[name].assign(t.numel(), 0.0f);
  }
}

void Adam::step() {
  ++step_count_;
  const double bc1 = 1.0 - std::pow(static_cast<double>(beta1_), static_cast<double>(step_count_));
  const double bc2 = 1.0 - std::pow(static_cast<double>(beta2_), static_cast<double>(step_count_));
  for (auto& [name, t] : params_) {
    if (!t.has_grad()) continue;
    auto& m = m_[name];
    auto& v = v_[name];
    auto g = t.grad();
    auto w = t.mutable_data();
    for (std::size_t i = 0; i < w.size(); ++i) {
      m[i] = beta1_ * m[i] + (1.0f - beta1_) * g[i];
      v[i] = beta2_ * v[i] + (1.0f - beta2_) * g[i] * g[i];
      const double mhat = m[i] / bc1;
      const double vhat = v[i] / bc2;
      w[i] -= static_cast<float>(lr_ * mhat / (std::sqrt(vhat) + eps_));
    }
  }
  params_.zero_grad();
}

std::unique_ptr<Optimizer> make_optimizer(const std::string& kind, ParameterRegistry& params, float lr) {
  if (kind == "sgd") return std::make_unique<SgdMomentum>(params, lr);
  if (kind == "adam") return std::make_unique<Adam>(params, lr);
  throw ValidationError("unknown optimizer '" + kind + "' (expected sgd or adam)");
}

}  // namespace idfvc::nn
