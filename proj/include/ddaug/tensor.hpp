// Copyright 2026 The ddaug Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "ddaug/errors.hpp"

namespace ddaug {

using Shape = std::vector<std::size_t>;

std::size_t shape_numel(const Shape& shape);
std::string shape_str(const Shape& shape);

/// Placement of tensor storage. Only host memory exists today; the enum is
/// the seam where accelerator backends would plug in.
enum class Device { cpu };

template <typename T>
class Tensor;

namespace detail {

template <typename T>
struct Node;

template <typename T>
struct TensorImpl {
  Shape shape;
  std::vector<T> data;
  std::vector<T> grad;  // empty until the first accumulation
  bool requires_grad = false;
  std::shared_ptr<Node<T>> grad_fn;  // set for recorded (non-leaf) results
};

/// One recorded operation. `seq` is a process-wide monotone insertion index,
/// so every node's inputs carry smaller sequence numbers than the node.
template <typename T>
struct Node {
  // grad_in[k] is pre-sized with zeros when input k needs a gradient and is
  // left empty otherwise.
  using BackwardFn =
      std::function<void(std::span<const T> grad_out, std::vector<std::vector<T>>& grad_in)>;

  std::uint64_t seq = 0;
  const char* name = "";
  std::vector<std::shared_ptr<TensorImpl<T>>> inputs;
  BackwardFn backward;
};

std::uint64_t next_node_seq();

}  // namespace detail

/// Thread-local switch for graph recording.
bool grad_enabled();

/// Disables graph recording on the current thread for its lifetime.
class NoGradGuard {
 public:
  NoGradGuard();
  ~NoGradGuard();
  NoGradGuard(const NoGradGuard&) = delete;
  NoGradGuard& operator=(const NoGradGuard&) = delete;

 private:
  bool previous_;
};

/// Dense row-major n-dimensional array taking part in reverse-mode autodiff.
///
/// Tensors are shared handles: copying a Tensor aliases the same storage and
/// graph position. Use clone() for an independent copy.
template <typename T>
class Tensor {
 public:
  using value_type = T;

  Tensor();
  explicit Tensor(Shape shape, T fill = T(0));
  Tensor(Shape shape, std::vector<T> values);

  static Tensor scalar(T value);
  static Tensor zeros(Shape shape) { return Tensor(std::move(shape), T(0)); }
  static Tensor ones(Shape shape) { return Tensor(std::move(shape), T(1)); }
  static Tensor full(Shape shape, T value) { return Tensor(std::move(shape), value); }

  bool defined() const noexcept { return impl_ != nullptr; }
  const Shape& shape() const { return impl_->shape; }
  std::size_t rank() const { return impl_->shape.size(); }
  std::size_t dim(std::size_t axis) const;
  std::size_t numel() const { return impl_->data.size(); }
  Device device() const noexcept { return Device::cpu; }

  std::span<const T> data() const { return impl_->data; }
  /// Writable view of the values. Mutating a tensor that a live graph has
  /// saved for its backward pass changes the gradients that graph computes.
  std::span<T> mutable_data() { return impl_->data; }
  std::vector<T> to_vector() const { return impl_->data; }

  T item() const;

  template <typename... I>
  T at(I... indices) const {
    const std::size_t idx[] = {static_cast<std::size_t>(indices)...};
    return impl_->data[offset(idx)];
  }

  bool requires_grad() const noexcept {
    return impl_ && (impl_->requires_grad || impl_->grad_fn != nullptr);
  }
  /// Marks a leaf as trainable. Throws GraphError on a recorded result.
  Tensor& set_requires_grad(bool flag);
  bool is_leaf() const noexcept { return impl_ && impl_->grad_fn == nullptr; }

  bool has_grad() const noexcept { return impl_ && !impl_->grad.empty(); }
  std::span<const T> grad() const { return impl_->grad; }
  /// Gradient as a detached tensor; zeros when none has been accumulated.
  Tensor grad_tensor() const;
  void zero_grad();

  /// Same values, no graph history, requires_grad false.
  Tensor detach() const;
  /// Deep copy; leaf trainability is preserved, history is not.
  Tensor clone() const;

  const std::shared_ptr<detail::TensorImpl<T>>& impl() const noexcept { return impl_; }
  static Tensor from_impl(std::shared_ptr<detail::TensorImpl<T>> impl);

 private:
  std::size_t offset(std::span<const std::size_t> idx) const;

  std::shared_ptr<detail::TensorImpl<T>> impl_;
};

namespace detail {

template <typename T>
bool any_requires_grad(std::initializer_list<const Tensor<T>*> inputs) {
  if (!grad_enabled()) return false;
  for (const Tensor<T>* t : inputs)
    if (t->requires_grad()) return true;
  return false;
}

/// Builds a result tensor and, when any input needs a gradient, records the
/// node that produced it.
template <typename T>
Tensor<T> make_result(Shape shape, std::vector<T> data, std::vector<Tensor<T>> inputs,
                      const char* name, typename Node<T>::BackwardFn backward);

}  // namespace detail

/// Reverse-mode sweep from a single-element root. Gradients accumulate into
/// every trainable leaf reachable from the root; calling it twice without
/// zero_grad() adds the gradients twice.
template <typename T>
void backward(const Tensor<T>& root);

using Tensor32 = Tensor<float>;
using Tensor64 = Tensor<double>;

}  // namespace ddaug
