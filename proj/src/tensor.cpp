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

#include "ddaug/tensor.hpp"

#include <algorithm>
#include <atomic>
#include <numeric>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace ddaug {

std::size_t shape_numel(const Shape& shape) {
  return std::accumulate(shape.begin(), shape.end(), std::size_t{1}, std::multiplies<>());
}

std::string shape_str(const Shape& shape) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < shape.size(); ++i) os << (i ? ", " : "") << shape[i];
  if (shape.size() == 1) os << ',';
  os << ')';
  return os.str();
}

namespace detail {

std::uint64_t next_node_seq() {
  static std::atomic<std::uint64_t> counter{0};
  return counter.fetch_add(1, std::memory_order_relaxed) + 1;
}

}  // namespace detail

namespace {
thread_local bool t_grad_enabled = true;
}

bool grad_enabled() { return t_grad_enabled; }

NoGradGuard::NoGradGuard() : previous_(t_grad_enabled) { t_grad_enabled = false; }
NoGradGuard::~NoGradGuard() { t_grad_enabled = previous_; }

template <typename T>
Tensor<T>::Tensor() = default;

template <typename T>
Tensor<T>::Tensor(Shape shape, T fill) : impl_(std::make_shared<detail::TensorImpl<T>>()) {
  impl_->data.assign(shape_numel(shape), fill);
  impl_->shape = std::move(shape);
}

template <typename T>
Tensor<T>::Tensor(Shape shape, std::vector<T> values)
    : impl_(std::make_shared<detail::TensorImpl<T>>()) {
  if (shape_numel(shape) != values.size())
    throw ShapeError("tensor of shape " + shape_str(shape) + " cannot hold " +
                     std::to_string(values.size()) + " values");
  impl_->shape = std::move(shape);
  impl_->data = std::move(values);
}

template <typename T>
Tensor<T> Tensor<T>::scalar(T value) {
  return Tensor(Shape{}, std::vector<T>{value});
}

template <typename T>
std::size_t Tensor<T>::dim(std::size_t axis) const {
  if (axis >= rank())
    throw ShapeError("axis " + std::to_string(axis) + " out of range for shape " +
                     shape_str(shape()));
  return impl_->shape[axis];
}

template <typename T>
T Tensor<T>::item() const {
  if (numel() != 1)
    throw ShapeError("item() needs a single-element tensor, got shape " + shape_str(shape()));
  return impl_->data[0];
}

template <typename T>
std::size_t Tensor<T>::offset(std::span<const std::size_t> idx) const {
  const Shape& s = impl_->shape;
  if (idx.size() != s.size())
    throw ShapeError("expected " + std::to_string(s.size()) + " indices, got " +
                     std::to_string(idx.size()));
  std::size_t off = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (idx[i] >= s[i]) throw ShapeError("index out of range for shape " + shape_str(s));
    off = off * s[i] + idx[i];
  }
  return off;
}

template <typename T>
Tensor<T>& Tensor<T>::set_requires_grad(bool flag) {
  if (impl_->grad_fn) throw GraphError("requires_grad can only be set on leaf tensors");
  impl_->requires_grad = flag;
  return *this;
}

template <typename T>
Tensor<T> Tensor<T>::grad_tensor() const {
  if (!has_grad()) return Tensor(shape(), T(0));
  return Tensor(shape(), impl_->grad);
}

template <typename T>
void Tensor<T>::zero_grad() {
  if (impl_) impl_->grad.clear();
}

template <typename T>
Tensor<T> Tensor<T>::detach() const {
  return Tensor(shape(), impl_->data);
}

template <typename T>
Tensor<T> Tensor<T>::clone() const {
  Tensor out(shape(), impl_->data);
  out.impl_->requires_grad = requires_grad();
  return out;
}

template <typename T>
Tensor<T> Tensor<T>::from_impl(std::shared_ptr<detail::TensorImpl<T>> impl) {
  Tensor t;
  t.impl_ = std::move(impl);
  return t;
}

namespace detail {

template <typename T>
Tensor<T> make_result(Shape shape, std::vector<T> data, std::vector<Tensor<T>> inputs,
                      const char* name, typename Node<T>::BackwardFn backward) {
  Tensor<T> out(std::move(shape), std::move(data));
  if (!grad_enabled()) return out;
  bool needed = false;
  for (const auto& in : inputs) needed = needed || in.requires_grad();
  if (!needed) return out;

  auto node = std::make_shared<Node<T>>();
  node->seq = next_node_seq();
  node->name = name;
  node->inputs.reserve(inputs.size());
  for (auto& in : inputs) node->inputs.push_back(in.impl());
  node->backward = std::move(backward);
  out.impl()->grad_fn = std::move(node);
  return out;
}

}  // namespace detail

template <typename T>
void backward(const Tensor<T>& root) {
  if (!root.defined()) throw GraphError("backward() on an undefined tensor");
  if (root.numel() != 1)
    throw GraphError("backward() needs a scalar root, got shape " + shape_str(root.shape()));
  const auto& root_impl = root.impl();
  if (!root_impl->grad_fn) {
    if (root_impl->requires_grad) {
      // A trainable leaf used directly as the loss.
      if (root_impl->grad.empty()) root_impl->grad.assign(1, T(0));
      root_impl->grad[0] += T(1);
      return;
    }
    throw GraphError("backward() on a constant: the root is not connected to any trainable tensor");
  }

  using NodeT = detail::Node<T>;
  std::vector<NodeT*> order;
  std::unordered_set<NodeT*> seen;
  std::vector<NodeT*> stack{root_impl->grad_fn.get()};
  while (!stack.empty()) {
    NodeT* n = stack.back();
    stack.pop_back();
    if (!seen.insert(n).second) continue;
    order.push_back(n);
    for (const auto& in : n->inputs)
      if (in->grad_fn) stack.push_back(in->grad_fn.get());
  }
  std::sort(order.begin(), order.end(),
            [](const NodeT* a, const NodeT* b) { return a->seq > b->seq; });

  std::unordered_map<NodeT*, std::vector<T>> pending;
  pending[root_impl->grad_fn.get()] = std::vector<T>{T(1)};

  for (NodeT* node : order) {
    auto it = pending.find(node);
    if (it == pending.end()) continue;
    std::vector<T> grad_out = std::move(it->second);
    pending.erase(it);

    std::vector<std::vector<T>> grad_in(node->inputs.size());
    for (std::size_t k = 0; k < node->inputs.size(); ++k) {
      const auto& in = node->inputs[k];
      if (in->grad_fn || in->requires_grad) grad_in[k].assign(in->data.size(), T(0));
    }
    node->backward(grad_out, grad_in);

    for (std::size_t k = 0; k < node->inputs.size(); ++k) {
      if (grad_in[k].empty()) continue;
      const auto& in = node->inputs[k];
      std::vector<T>& target = in->grad_fn ? pending[in->grad_fn.get()] : in->grad;
      if (target.empty()) {
        target = std::move(grad_in[k]);
      } else {
        for (std::size_t i = 0; i < target.size(); ++i) target[i] += grad_in[k][i];
      }
    }
  }
}

template class Tensor<float>;
template class Tensor<double>;

template Tensor<float> detail::make_result<float>(Shape, std::vector<float>,
                                                  std::vector<Tensor<float>>, const char*,
                                                  detail::Node<float>::BackwardFn);
template Tensor<double> detail::make_result<double>(Shape, std::vector<double>,
                                                    std::vector<Tensor<double>>, const char*,
                                                    detail::Node<double>::BackwardFn);
template void backward<float>(const Tensor<float>&);
template void backward<double>(const Tensor<double>&);

}  // namespace ddaug
