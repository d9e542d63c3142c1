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

#ifndef IDFVC_NN_TENSOR_H_
#define IDFVC_NN_TENSOR_H_

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace idfvc::nn {

using Shape = std::vector<std::size_t>;

std::string shape_to_string(const Shape& shape);
std::size_t shape_numel(const Shape& shape);

struct TensorImpl;

// Backward closure: receives the output node and pushes its gradient into the
// parents' grad buffers.
using BackwardFn = std::function<void(TensorImpl& out)>;

struct TensorImpl {
  Shape shape;
  std::vector<float> data;
  std::vector<float> grad;  // empty until first accumulation
  bool requires_grad = false;
  std::vector<std::shared_ptr<TensorImpl>> parents;
  BackwardFn backward;

  float* grad_buffer();  // allocates zeros on demand
};

// Shared handle over a float32 buffer plus its autodiff node. Copies alias the
// same storage, which is how layers and the parameter registry share weights.
class Tensor {
 public:
  Tensor() = default;

  static Tensor zeros(const Shape& shape, bool requires_grad = false);
  static Tensor filled(const Shape& shape, float value, bool requires_grad = false);
  static Tensor from(const Shape& shape, std::vector<float> values, bool requires_grad = false);
  static Tensor scalar(float value, bool requires_grad = false);

  bool defined() const { return impl_ != nullptr; }
  const Shape& shape() const;
  std::size_t rank() const { return shape().size(); }
  std::size_t dim(std::size_t axis) const;
  std::size_t numel() const;

  std::span<const float> data() const;
  std::span<float> mutable_data();
  float item() const;  // requires numel() == 1
  float at(std::size_t row, std::size_t col) const;

  bool requires_grad() const;
  void set_requires_grad(bool value);
  bool has_grad() const;
  std::span<const float> grad() const;  // empty span when no gradient yet
  void zero_grad();

  // Reverse-mode sweep from this scalar.
  void backward() const;

  // Same values, no history, no gradient tracking.
  Tensor detach() const;
  // Deep copy of values (no history); keeps requires_grad.
  Tensor clone() const;

  TensorImpl* impl() const { return impl_.get(); }
  const std::shared_ptr<TensorImpl>& impl_ptr() const { return impl_; }

 private:
  explicit Tensor(std::shared_ptr<TensorImpl> impl) : impl_(std::move(impl)) {}
  friend Tensor make_result(const Shape&, std::vector<float>, std::vector<Tensor>, BackwardFn);

  std::shared_ptr<TensorImpl> impl_;
};

// Builds an op output. When any parent requires grad and grad mode is on, the
// output records the parents and backward closure.
Tensor make_result(const Shape& shape, std::vector<float> values, std::vector<Tensor> parents,
                   BackwardFn backward);

bool grad_enabled();

// Disables graph construction on the current thread for its lifetime.
class NoGradGuard {
 public:
  NoGradGuard();
  ~NoGradGuard();
  NoGradGuard(const NoGradGuard&) = delete;
  NoGradGuard& operator=(const NoGradGuard&) = delete;

 private:
  bool previous_;
};

}  // namespace idfvc::nn

#endif  // IDFVC_NN_TENSOR_H_
