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

#ifndef IDFVC_NN_OPS_H_
#define IDFVC_NN_OPS_H_

#include <cstddef>
#include <vector>

#include "idfvc/nn/tensor.h"

// Differentiable tensor operations. Matrices are rank-2 row-major; vectors may
// be rank 1 or [1 x n]. Binary elementwise ops accept an identical shape, a
// single row broadcast over the rows of the left operand, or a scalar.

namespace idfvc::nn {

Tensor matmul(const Tensor& a, const Tensor& b);
Tensor transpose(const Tensor& a);
Tensor reshape(const Tensor& a, const Shape& shape);

Tensor add(const Tensor& a, const Tensor& b);
Tensor sub(const Tensor& a, const Tensor& b);
Tensor mul(const Tensor& a, const Tensor& b);
Tensor scale(const Tensor& a, float factor);
Tensor add_scalar(const Tensor& a, float value);

Tensor tanh(const Tensor& a);
Tensor relu(const Tensor& a);
Tensor exp(const Tensor& a);
Tensor log(const Tensor& a);  // NumericError on non-positive input
Tensor square(const Tensor& a);
Tensor sqrt(const Tensor& a);  // NumericError on negative input
Tensor clamp(const Tensor& a, float lo, float hi);

// Stable softmax along `axis` (per-slice max subtraction). NumericError on NaN.
Tensor softmax(const Tensor& x, std::size_t axis);
Tensor log_softmax(const Tensor& x, std::size_t axis);

Tensor sum(const Tensor& a);   // -> [1]
Tensor mean(const Tensor& a);  // -> [1]
// Reduction of a rank-2 tensor along `axis`, keeping the reduced axis as 1.
Tensor sum_axis(const Tensor& a, std::size_t axis);
Tensor mean_axis(const Tensor& a, std::size_t axis);

Tensor broadcast_rows(const Tensor& row, std::size_t rows);
Tensor concat(const std::vector<Tensor>& parts, std::size_t axis);
Tensor slice_rows(const Tensor& a, std::size_t begin, std::size_t count);
Tensor gather_rows(const Tensor& a, const std::vector<std::size_t>& indices);
Tensor slice_cols(const Tensor& a, std::size_t begin, std::size_t count);

Tensor l2_normalize_rows(const Tensor& a, float eps = 1e-12f);

// Forward value of `quantized`; the incoming gradient is routed unchanged to
// `z` and nothing flows into `quantized`.
Tensor straight_through(const Tensor& z, const Tensor& quantized);

// softmax(q k^T / sqrt(d_k)) v
Tensor scaled_dot_attention(const Tensor& q, const Tensor& k, const Tensor& v);

// -(1/N) sum_n sum_c t_nc log softmax(logits)_nc. Each target row must be one-hot.
Tensor cross_entropy(const Tensor& logits, const Tensor& one_hot_targets);

}  // namespace idfvc::nn

#endif  // IDFVC_NN_OPS_H_
