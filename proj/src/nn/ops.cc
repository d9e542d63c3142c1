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

#include "idfvc/nn/ops.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "idfvc/common/errors.h"

namespace idfvc::nn {

namespace {

std::size_t rows_of(const Tensor& t) { return t.rank() == 1 ? 1 : t.shape()[0]; }
std::size_t cols_of(const Tensor& t) { return t.rank() == 1 ? t.shape()[0] : t.shape()[1]; }

void require_rank2(const Tensor& t, const char* op) {
  if (t.rank() != 2) {
    throw DimensionError(std::string(op) + ": expected a rank-2 tensor, got " +
                         shape_to_string(t.shape()));
  }
}

void require_finite(const Tensor& t, const char* op) {
  for (float v : t.data()) {
    if (std::isnan(v)) throw NumericError(std::string(op) + ": NaN input");
  }
}

enum class Broadcast { kSame, kRow, kScalar };

Broadcast classify(const Tensor& a, const Tensor& b, const char* op) {
  if (a.shape() == b.shape()) return Broadcast::kSame;
  if (b.numel() == 1) return Broadcast::kScalar;
  const bool b_is_row = b.rank() == 1 || (b.rank() == 2 && b.shape()[0] == 1);
  if (a.rank() == 2 && b_is_row && b.numel() == a.shape()[1]) return Broadcast::kRow;
  throw DimensionError(std::string(op) + ": cannot combine shapes " + shape_to_string(a.shape()) +
                       " and " + shape_to_string(b.shape()));
}

inline std::size_t b_index(Broadcast mode, std::size_t i, std::size_t cols) {
  switch (mode) {
    case Broadcast::kSame: return i;
    case Broadcast::kRow: return i % cols;
    case Broadcast::kScalar: return 0;
  }
  return 0;
}

// Elementwise binary op with partials da(x, y, out) and db(x, y, out).
template <typename Fwd, typename Da, typename Db>
Tensor binary_op(const Tensor& a, const Tensor& b, const char* name, Fwd fwd, Da da, Db db) {
  const Broadcast mode = classify(a, b, name);
  const std::size_t cols = cols_of(a);
  const auto ad = a.data();
  const auto bd = b.data();
  std::vector<float> out(ad.size());
  for (std::size_t i = 0; i < ad.size(); ++i) out[i] = fwd(ad[i], bd[b_index(mode, i, cols)]);
  return make_result(a.shape(), std::move(out), {a, b}, [mode, cols, da, db](TensorImpl& o) {
    TensorImpl& pa = *o.parents[0];
    TensorImpl& pb = *o.parents[1];
    const float* g = o.grad.data();
    if (pa.requires_grad) {
      float* ga = pa.grad_buffer();
      for (std::size_t i = 0; i < o.data.size(); ++i) {
        const std::size_t j = b_index(mode, i, cols);
        ga[i] += g[i] * da(pa.data[i], pb.data[j], o.data[i]);
      }
    }
    if (pb.requires_grad) {
      float* gb = pb.grad_buffer();
      for (std::size_t i = 0; i < o.data.size(); ++i) {
        const std::size_t j = b_index(mode, i, cols);
        gb[j] += g[i] * db(pa.data[i], pb.data[j], o.data[i]);
      }
    }
  });
}

// Elementwise unary op with derivative d(x, out).
template <typename Fwd, typename D>
Tensor unary_op(const Tensor& a, Fwd fwd, D deriv) {
  const auto ad = a.data();
  std::vector<float> out(ad.size());
  for (std::size_t i = 0; i < ad.size(); ++i) out[i] = fwd(ad[i]);
  return make_result(a.shape(), std::move(out), {a}, [deriv](TensorImpl& o) {
    TensorImpl& pa = *o.parents[0];
    float* ga = pa.grad_buffer();
    for (std::size_t i = 0; i < o.data.size(); ++i) ga[i] += o.grad[i] * deriv(pa.data[i], o.data[i]);
  });
}

// C[m x n] += A[m x k] * B[k x n] with double accumulation per output row.
void gemm_acc(const float* a, const float* b, float* c, std::size_t m, std::size_t k, std::size_t n,
              bool overwrite) {
  std::vector<double> acc(n);
  for (std::size_t i = 0; i < m; ++i) {
    std::fill(acc.begin(), acc.end(), 0.0);
    for (std::size_t p = 0; p < k; ++p) {
      const double av = a[i * k + p];
      if (av == 0.0) continue;
      const float* brow = b + p * n;
      for (std::size_t j = 0; j < n; ++j) acc[j] += av * brow[j];
    }
    float* crow = c + i * n;
    for (std::size_t j = 0; j < n; ++j) {
      crow[j] = overwrite ? static_cast<float>(acc[j]) : static_cast<float>(crow[j] + acc[j]);
    }
  }
}

std::vector<float> transposed(const float* a, std::size_t rows, std::size_t cols) {
  std::vector<float> t(rows * cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) t[j * rows + i] = a[i * cols + j];
  return t;
}

struct AxisLayout {
  std::size_t outer, n, inner;
};

AxisLayout axis_layout(const Shape& shape, std::size_t axis, const char* op) {
  if (axis >= shape.size()) {
    throw DimensionError(std::string(op) + ": axis " + std::to_string(axis) +
                         " invalid for shape " + shape_to_string(shape));
  }
  AxisLayout l{1, shape[axis], 1};
  for (std::size_t i = 0; i < axis; ++i) l.outer *= shape[i];
  for (std::size_t i = axis + 1; i < shape.size(); ++i) l.inner *= shape[i];
  return l;
}

}  // namespace

Tensor matmul(const Tensor& a, const Tensor& b) {
  require_rank2(a, "matmul");
  require_rank2(b, "matmul");
  const std::size_t m = a.shape()[0], k = a.shape()[1], n = b.shape()[1];
  if (b.shape()[0] != k) {
    throw DimensionError("matmul: inner dimensions differ, " + shape_to_string(a.shape()) + " x " +
                         shape_to_string(b.shape()));
  }
  std::vector<float> out(m * n);
  gemm_acc(a.data().data(), b.data().data(), out.data(), m, k, n, true);
  return make_result({m, n}, std::move(out), {a, b}, [m, k, n](TensorImpl& o) {
    TensorImpl& pa = *o.parents[0];
    TensorImpl& pb = *o.parents[1];
    if (pa.requires_grad) {
      const auto bt = transposed(pb.data.data(), k, n);  // [n x k]
      gemm_acc(o.grad.data(), bt.data(), pa.grad_buffer(), m, n, k, false);
    }
    if (pb.requires_grad) {
      const auto at = transposed(pa.data.data(), m, k);  // [k x m]
      gemm_acc(at.data(), o.grad.data(), pb.grad_buffer(), k, m, n, false);
    }
  });
}

Tensor transpose(const Tensor& a) {
  require_rank2(a, "transpose");
  const std::size_t r = a.shape()[0], c = a.shape()[1];
  return make_result({c, r}, transposed(a.data().data(), r, c), {a}, [r, c](TensorImpl& o) {
    float* ga = o.parents[0]->grad_buffer();
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < c; ++j) ga[i * c + j] += o.grad[j * r + i];
  });
}

Tensor reshape(const Tensor& a, const Shape& shape) {
  if (shape_numel(shape) != a.numel()) {
    throw DimensionError("reshape: " + shape_to_string(a.shape()) + " -> " + shape_to_string(shape));
  }
  std::vector<float> out(a.data().begin(), a.data().end());
  return make_result(shape, std::move(out), {a}, [](TensorImpl& o) {
    float* ga = o.parents[0]->grad_buffer();
    for (std::size_t i = 0; i < o.grad.size(); ++i) ga[i] += o.grad[i];
  });
}

Tensor add(const Tensor& a, const Tensor& b) {
  return binary_op(
      a, b, "add", [](float x, float y) { return x + y; }, [](float, float, float) { return 1.0f; },
      [](float, float, float) { return 1.0f; });
}

Tensor sub(const Tensor& a, const Tensor& b) {
  return binary_op(
      a, b, "sub", [](float x, float y) { return x - y; }, [](float, float, float) { return 1.0f; },
      [](float, float, float) { return -1.0f; });
}

Tensor mul(const Tensor& a, const Tensor& b) {
  return binary_op(
      a, b, "mul", [](float x, float y) { return x * y; }, [](float, float y, float) { return y; },
      [](float x, float, float) { return x; });
}

Tensor scale(const Tensor& a, float factor) {
  return unary_op(
      a, [factor](float x) { return x * factor; }, [factor](float, float) { return factor; });
}

Tensor add_scalar(const Tensor& a, float value) {
  return unary_op(
      a, [value](float x) { return x + value; }, [](float, float) { return 1.0f; });
}

Tensor tanh(const Tensor& a) {
  return unary_op(
      a, [](float x) { return std::tanh(x); }, [](float, float y) { return 1.0f - y * y; });
}

Tensor relu(const Tensor& a) {
  return unary_op(
      a, [](float x) { return x > 0.0f ? x : 0.0f; },
      [](float x, float) { return x > 0.0f ? 1.0f : 0.0f; });
}

Tensor exp(const Tensor& a) {
  return unary_op(
      a, [](float x) { return std::exp(x); }, [](float, float y) { return y; });
}

Tensor log(const Tensor& a) {
  for (float v : a.data()) {
    if (!(v > 0.0f)) throw NumericError("log: non-positive input " + std::to_string(v));
  }
  return unary_op(
      a, [](float x) { return std::log(x); }, [](float x, float) { return 1.0f / x; });
}

Tensor square(const Tensor& a) {
  return unary_op(
      a, [](float x) { return x * x; }, [](float x, float) { return 2.0f * x; });
}

Tensor sqrt(const Tensor& a) {
  for (float v : a.data()) {
    if (v < 0.0f || std::isnan(v)) throw NumericError("sqrt: negative input " + std::to_string(v));
  }
  return unary_op(
      a, [](float x) { return std::sqrt(x); },
      [](float, float y) { return y > 0.0f ? 0.5f / y : 0.0f; });
}

Tensor clamp(const Tensor& a, float lo, float hi) {
  return unary_op(
      a, [lo, hi](float x) { return std::clamp(x, lo, hi); },
      [lo, hi](float x, float) { return (x >= lo && x <= hi) ? 1.0f : 0.0f; });
}

Tensor softmax(const Tensor& x, std::size_t axis) {
  require_finite(x, "softmax");
  const AxisLayout l = axis_layout(x.shape(), axis, "softmax");
  const auto xd = x.data();
  std::vector<float> out(xd.size());
  for (std::size_t o = 0; o < l.outer; ++o) {
    for (std::size_t in = 0; in < l.inner; ++in) {
      const std::size_t base = o * l.n * l.inner + in;
      float mx = -std::numeric_limits<float>::infinity();
      for (std::size_t k = 0; k < l.n; ++k) mx = std::max(mx, xd[base + k * l.inner]);
      double total = 0.0;
      for (std::size_t k = 0; k < l.n; ++k) total += std::exp(static_cast<double>(xd[base + k * l.inner]) - mx);
      for (std::size_t k = 0; k < l.n; ++k) {
        out[base + k * l.inner] =
            static_cast<float>(std::exp(static_cast<double>(xd[base + k * l.inner]) - mx) / total);
      }
    }
  }
  return make_result(x.shape(), std::move(out), {x}, [l](TensorImpl& o) {
    float* gx = o.parents[0]->grad_buffer();
    for (std::size_t ou = 0; ou < l.outer; ++ou) {
      for (std::size_t in = 0; in < l.inner; ++in) {
        const std::size_t base = ou * l.n * l.inner + in;
        double dot = 0.0;
        for (std::size_t k = 0; k < l.n; ++k) {
          const std::size_t i = base + k * l.inner;
          dot += static_cast<double>(o.grad[i]) * o.data[i];
        }
        for (std::size_t k = 0; k < l.n; ++k) {
          const std::size_t i = base + k * l.inner;
          gx[i] += static_cast<float>(o.data[i] * (o.grad[i] - dot));
        }
      }
    }
  });
}

Tensor log_softmax(const Tensor& x, std::size_t axis) {
  require_finite(x, "log_softmax");
  const AxisLayout l = axis_layout(x.shape(), axis, "log_softmax");
  const auto xd = x.data();
  std::vector<float> out(xd.size());
  for (std::size_t o = 0; o < l.outer; ++o) {
    for (std::size_t in = 0; in < l.inner; ++in) {
      const std::size_t base = o * l.n * l.inner + in;
      float mx = -std::numeric_limits<float>::infinity();
      for (std::size_t k = 0; k < l.n; ++k) mx = std::max(mx, xd[base + k * l.inner]);
      double total = 0.0;
      for (std::size_t k = 0; k < l.n; ++k) total += std::exp(static_cast<double>(xd[base + k * l.inner]) - mx);
      const double lse = mx + std::log(total);
      for (std::size_t k = 0; k < l.n; ++k) {
        out[base + k * l.inner] = static_cast<float>(xd[base + k * l.inner] - lse);
      }
    }
  }
  return make_result(x.shape(), std::move(out), {x}, [l](TensorImpl& o) {
    float* gx = o.parents[0]->grad_buffer();
    for (std::size_t ou = 0; ou < l.outer; ++ou) {
      for (std::size_t in = 0; in < l.inner; ++in) {
        const std::size_t base = ou * l.n * l.inner + in;
        double gsum = 0.0;
        for (std::size_t k = 0; k < l.n; ++k) gsum += o.grad[base + k * l.inner];
        for (std::size_t k = 0; k < l.n; ++k) {
          const std::size_t i = base + k * l.inner;
          gx[i] += static_cast<float>(o.grad[i] - std::exp(static_cast<double>(o.data[i])) * gsum);
        }
      }
    }
  });
}

Tensor sum(const Tensor& a) {
  double total = 0.0;
  for (float v : a.data()) total += v;
  return make_result({1}, {static_cast<float>(total)}, {a}, [](TensorImpl& o) {
    float* ga = o.parents[0]->grad_buffer();
    const float g = o.grad[0];
    for (std::size_t i = 0; i < o.parents[0]->data.size(); ++i) ga[i] += g;
  });
}

Tensor mean(const Tensor& a) { return scale(sum(a), 1.0f / static_cast<float>(a.numel())); }

Tensor sum_axis(const Tensor& a, std::size_t axis) {
  require_rank2(a, "sum_axis");
  if (axis > 1) throw DimensionError("sum_axis: axis must be 0 or 1");
  const std::size_t r = a.shape()[0], c = a.shape()[1];
  const auto ad = a.data();
  Shape out_shape = axis == 0 ? Shape{1, c} : Shape{r, 1};
  std::vector<double> acc(axis == 0 ? c : r, 0.0);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) acc[axis == 0 ? j : i] += ad[i * c + j];
  std::vector<float> out(acc.begin(), acc.end());
  return make_result(out_shape, std::move(out), {a}, [axis, r, c](TensorImpl& o) {
    float* ga = o.parents[0]->grad_buffer();
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < c; ++j) ga[i * c + j] += o.grad[axis == 0 ? j : i];
  });
}

Tensor mean_axis(const Tensor& a, std::size_t axis) {
  return scale(sum_axis(a, axis), 1.0f / static_cast<float>(a.dim(axis)));
}

Tensor broadcast_rows(const Tensor& row, std::size_t rows) {
  const std::size_t c = row.numel();
  if (!(row.rank() == 1 || (row.rank() == 2 && row.shape()[0] == 1))) {
    throw DimensionError("broadcast_rows: expected a single row, got " + shape_to_string(row.shape()));
  }
  std::vector<float> out(rows * c);
  for (std::size_t i = 0; i < rows; ++i) std::copy(row.data().begin(), row.data().end(), out.begin() + i * c);
  return make_result({rows, c}, std::move(out), {row}, [rows, c](TensorImpl& o) {
    float* g = o.parents[0]->grad_buffer();
    for (std::size_t i = 0; i < rows; ++i)
      for (std::size_t j = 0; j < c; ++j) g[j] += o.grad[i * c + j];
  });
}

Tensor concat(const std::vector<Tensor>& parts, std::size_t axis) {
  if (parts.empty()) throw DimensionError("concat: no inputs");
  if (axis > 1) throw DimensionError("concat: axis must be 0 or 1");
  std::vector<std::size_t> rows, cols;
  for (const Tensor& p : parts) {
    if (p.rank() > 2) throw DimensionError("concat: rank > 2 not supported");
    rows.push_back(rows_of(p));
    cols.push_back(cols_of(p));
  }
  std::size_t total_r = 0, total_c = 0;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (axis == 0 && cols[i] != cols[0]) {
      throw DimensionError("concat(axis 0): column counts differ, " + shape_to_string(parts[0].shape()) +
                           " vs " + shape_to_string(parts[i].shape()));
    }
    if (axis == 1 && rows[i] != rows[0]) {
      throw DimensionError("concat(axis 1): row counts differ, " + shape_to_string(parts[0].shape()) +
                           " vs " + shape_to_string(parts[i].shape()));
    }
    total_r += rows[i];
    total_c += cols[i];
  }
  const std::size_t out_r = axis == 0 ? total_r : rows[0];
  const std::size_t out_c = axis == 0 ? cols[0] : total_c;
  std::vector<float> out(out_r * out_c);
  std::size_t offset = 0;
  for (std::size_t p = 0; p < parts.size(); ++p) {
    const auto d = parts[p].data();
    for (std::size_t i = 0; i < rows[p]; ++i)
      for (std::size_t j = 0; j < cols[p]; ++j) {
        const std::size_t oi = axis == 0 ? offset + i : i;
        const std::size_t oj = axis == 0 ? j : offset + j;
        out[oi * out_c + oj] = d[i * cols[p] + j];
      }
    offset += axis == 0 ? rows[p] : cols[p];
  }
  return make_result({out_r, out_c}, std::move(out), parts, [axis, rows, cols, out_c](TensorImpl& o) {
    std::size_t off = 0;
    for (std::size_t p = 0; p < o.parents.size(); ++p) {
      TensorImpl& pt = *o.parents[p];
      if (pt.requires_grad) {
        float* g = pt.grad_buffer();
        for (std::size_t i = 0; i < rows[p]; ++i)
          for (std::size_t j = 0; j < cols[p]; ++j) {
            const std::size_t oi = axis == 0 ? off + i : i;
            const std::size_t oj = axis == 0 ? j : off + j;
            g[i * cols[p] + j] += o.grad[oi * out_c + oj];
          }
      }
      off += axis == 0 ? rows[p] : cols[p];
    }
  });
}

Tensor slice_rows(const Tensor& a, std::size_t begin, std::size_t count) {
  require_rank2(a, "slice_rows");
  if (count == 0 || begin + count > a.shape()[0]) {
    throw DimensionError("slice_rows: rows [" + std::to_string(begin) + ", " +
                         std::to_string(begin + count) + ") out of range for " +
                         shape_to_string(a.shape()));
  }
  std::vector<std::size_t> idx(count);
  for (std::size_t i = 0; i < count; ++i) idx[i] = begin + i;
  return gather_rows(a, idx);
}

Tensor gather_rows(const Tensor& a, const std::vector<std::size_t>& indices) {
  require_rank2(a, "gather_rows");
  if (indices.empty()) throw DimensionError("gather_rows: empty index list");
  const std::size_t r = a.shape()[0], c = a.shape()[1];
  std::vector<float> out(indices.size() * c);
  for (std::size_t i = 0; i < indices.size(); ++i) {
    if (indices[i] >= r) {
      throw DimensionError("gather_rows: index " + std::to_string(indices[i]) + " out of range for " +
                           shape_to_string(a.shape()));
    }
    std::copy_n(a.data().begin() + indices[i] * c, c, out.begin() + i * c);
  }
  return make_result({indices.size(), c}, std::move(out), {a}, [indices, c](TensorImpl& o) {
    float* g = o.parents[0]->grad_buffer();
    for (std::size_t i = 0; i < indices.size(); ++i)
      for (std::size_t j = 0; j < c; ++j) g[indices[i] * c + j] += o.grad[i * c + j];
  });
}

Tensor slice_cols(const Tensor& a, std::size_t begin, std::size_t count) {
  require_rank2(a, "slice_cols");
  const std::size_t r = a.shape()[0], c = a.shape()[1];
  if (count == 0 || begin + count > c) {
    throw DimensionError("slice_cols: columns [" + std::to_string(begin) + ", " +
                         std::to_string(begin + count) + ") out of range for " + shape_to_string(a.shape()));
  }
  std::vector<float> out(r * count);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < count; ++j) out[i * count + j] = a.data()[i * c + begin + j];
  return make_result({r, count}, std::move(out), {a}, [r, c, begin, count](TensorImpl& o) {
    float* g = o.parents[0]->grad_buffer();
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < count; ++j) g[i * c + begin + j] += o.grad[i * count + j];
  });
}

Tensor l2_normalize_rows(const Tensor& a, float eps) {
  const std::size_t r = rows_of(a), c = cols_of(a);
  const auto ad = a.data();
  std::vector<float> out(ad.size());
  std::vector<float> norms(r);
  for (std::size_t i = 0; i < r; ++i) {
    double ss = 0.0;
    for (std::size_t j = 0; j < c; ++j) ss += static_cast<double>(ad[i * c + j]) * ad[i * c + j];
    norms[i] = std::max(static_cast<float>(std::sqrt(ss)), eps);
    for (std::size_t j = 0; j < c; ++j) out[i * c + j] = ad[i * c + j] / norms[i];
  }
  return make_result(a.shape(), std::move(out), {a}, [r, c, norms, eps](TensorImpl& o) {
    float* g = o.parents[0]->grad_buffer();
    for (std::size_t i = 0; i < r; ++i) {
      const float n = norms[i];
      if (n <= eps) {
        for (std::size_t j = 0; j < c; ++j) g[i * c + j] += o.grad[i * c + j] / n;
        continue;
      }
      double dot = 0.0;
      for (std::size_t j = 0; j < c; ++j) dot += static_cast<double>(o.data[i * c + j]) * o.grad[i * c + j];
      for (std::size_t j = 0; j < c; ++j) {
        g[i * c + j] += static_cast<float>((o.grad[i * c + j] - o.data[i * c + j] * dot) / n);
      }
    }
  });
}

Tensor straight_through(const Tensor& z, const Tensor& quantized) {
  if (z.shape() != quantized.shape()) {
    throw DimensionError("straight_through: " + shape_to_string(z.shape()) + " vs " +
                         shape_to_string(quantized.shape()));
  }
  std::vector<float> out(quantized.data().begin(), quantized.data().end());
  return make_result(z.shape(), std::move(out), {z}, [](TensorImpl& o) {
    float* g = o.parents[0]->grad_buffer();
    for (std::size_t i = 0; i < o.grad.size(); ++i) g[i] += o.grad[i];
  });
}

Tensor scaled_dot_attention(const Tensor& q, const Tensor& k, const Tensor& v) {
  require_rank2(q, "scaled_dot_attention");
  require_rank2(k, "scaled_dot_attention");
  require_rank2(v, "scaled_dot_attention");
  if (q.shape()[1] != k.shape()[1]) {
    throw DimensionError("scaled_dot_attention: query dim " + shape_to_string(q.shape()) +
                         " does not match key dim " + shape_to_string(k.shape()));
  }
  if (k.shape()[0] != v.shape()[0]) {
    throw DimensionError("scaled_dot_attention: " + shape_to_string(k.shape()) + " keys vs " +
                         shape_to_string(v.shape()) + " values");
  }
  const float inv_sqrt_dk = 1.0f / std::sqrt(static_cast<float>(k.shape()[1]));
  Tensor scores = scale(matmul(q, transpose(k)), inv_sqrt_dk);
  return matmul(softmax(scores, 1), v);
}

Tensor cross_entropy(const Tensor& logits, const Tensor& one_hot_targets) {
  require_rank2(logits, "cross_entropy");
  if (logits.shape() != one_hot_targets.shape()) {
    throw DimensionError("cross_entropy: logits " + shape_to_string(logits.shape()) + " vs targets " +
                         shape_to_string(one_hot_targets.shape()));
  }
  const std::size_t n = logits.shape()[0], c = logits.shape()[1];
  const auto t = one_hot_targets.data();
  for (std::size_t i = 0; i < n; ++i) {
    int ones = 0;
    for (std::size_t j = 0; j < c; ++j) {
      const float v = t[i * c + j];
      if (v == 1.0f) {
        ++ones;
      } else if (v != 0.0f) {
        throw ValidationError("cross_entropy: target row " + std::to_string(i) + " is not one-hot");
      }
    }
    if (ones != 1) throw ValidationError("cross_entropy: target row " + std::to_string(i) + " is not one-hot");
  }
  Tensor picked = sum(mul(log_softmax(logits, 1), one_hot_targets.detach()));
  return scale(picked, -1.0f / static_cast<float>(n));
}

}  // namespace idfvc::nn
