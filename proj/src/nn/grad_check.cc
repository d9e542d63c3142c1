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

#include "idfvc/nn/grad_check.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "idfvc/common/errors.h"

namespace idfvc::nn {

namespace {

double evaluate(const std::function<Tensor()>& loss) {
  NoGradGuard guard;
  const float v = loss().item();
  if (!std::isfinite(v)) throw NumericError("grad_check: loss is not finite");
  return v;
}

}  // namespace

GradCheckResult grad_check(const std::function<Tensor()>& loss, ParameterRegistry& params,
                           const GradCheckOptions& options) {
  return grad_check(loss, params, options, [&loss] { return evaluate(loss); });
}

GradCheckResult grad_check(const std::function<Tensor()>& loss, ParameterRegistry& params,
                           const GradCheckOptions& options, const std::function<double()>& reference) {
  if (!(options.eps >= 1e-5f && options.eps <= 1e-2f)) {
    throw ValidationError("grad_check: eps must lie in [1e-5, 1e-2]");
  }
  params.zero_grad();
  Tensor root = loss();
  if (!std::isfinite(root.item())) throw NumericError("grad_check: loss is not finite");
  root.backward();

  // Flattened (parameter, element) list, optionally subsampled.
  std::vector<std::pair<Tensor*, std::size_t>> elements;
  for (auto& [name, t] : params) {
    for (std::size_t i = 0; i < t.numel(); ++i) elements.emplace_back(&t, i);
  }
  if (elements.size() > options.sample_limit) {
    Rng rng(options.seed);
    std::shuffle(elements.begin(), elements.end(), rng);
    elements.resize(options.sample_size);
  }

  GradCheckResult result;
  for (auto& [name, t] : params) {
    std::vector<float> analytic(t.numel(), 0.0f);
    if (t.has_grad()) std::copy(t.grad().begin(), t.grad().end(), analytic.begin());
    float scale = 0.0f;
    for (float g : analytic) scale = std::max(scale, std::fabs(g));
    const double denom = std::max(static_cast<double>(scale), 1e-6);

    for (auto& [tp, idx] : elements) {
      if (tp != &t) continue;
      float& x = t.mutable_data()[idx];
      const float saved = x;
      const float hi = saved + options.eps;
      const float lo = saved - options.eps;
      x = hi;
      const double f_hi = reference();
      x = lo;
      const double f_lo = reference();
      if (!std::isfinite(f_hi) || !std::isfinite(f_lo)) throw NumericError("grad_check: loss is not finite");
      x = saved;
      const double numeric = (f_hi - f_lo) / (static_cast<double>(hi) - static_cast<double>(lo));
      const double err = std::fabs(analytic[idx] - numeric) / denom;
      ++result.checked;
      if (err >= result.max_relative_error) {
        result.max_relative_error = err;
        result.worst_parameter = name;
        result.worst_index = idx;
        result.analytic = analytic[idx];
        result.numeric = numeric;
      }
    }
  }
  params.zero_grad();
  return result;
}

}  // namespace idfvc::nn
