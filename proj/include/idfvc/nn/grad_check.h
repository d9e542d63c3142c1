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

#ifndef IDFVC_NN_GRAD_CHECK_H_
#define IDFVC_NN_GRAD_CHECK_H_

#include <cstdint>
#include <functional>
#include <string>

#include "idfvc/nn/layers.h"
#include "idfvc/nn/tensor.h"

namespace idfvc::nn {

struct GradCheckResult {
  double max_relative_error = 0.0;
  std::string worst_parameter;
  std::size_t worst_index = 0;
  double analytic = 0.0;
  double numeric = 0.0;
  std::size_t checked = 0;
};

struct GradCheckOptions {
  float eps = 1e-3f;
  std::size_t sample_limit = 10000;  // above this many elements, check a random sample
  std::size_t sample_size = 2000;
  std::uint64_t seed = 0;
};

// Compares the reverse-mode gradient of the scalar `loss` with central finite
// differences for every element of every registered parameter.
//
// The error of element i in tensor P is |analytic_i - numeric_i| / max(|g|, 1e-6)
// where |g| is the largest analytic magnitude in P. Float32 losses carry
// ~1e-7 relative rounding, so per-element denominators would turn rounding
// noise on near-zero entries into spurious failures.
GradCheckResult grad_check(const std::function<Tensor()>& loss, ParameterRegistry& params,
                           const GradCheckOptions& options = {});

// Same comparison, but the finite differences are taken on `reference`, an
// independent float64 evaluation of the same function that reads the current
// parameter values. Float32 forwards resolve gradients only to about
// ulp(activation) / (2 eps), roughly 5e-5 at eps = 1e-3, which is too coarse
// for weakly coupled parameters such as attention projections.
GradCheckResult grad_check(const std::function<Tensor()>& loss, ParameterRegistry& params,
                           const GradCheckOptions& options, const std::function<double()>& reference);

}  // namespace idfvc::nn

#endif  // IDFVC_NN_GRAD_CHECK_H_
