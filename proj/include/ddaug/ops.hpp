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
#include <vector>

#include "ddaug/tensor.hpp"

namespace ddaug {

enum class BinaryOp { add, sub, mul, div, pow, min, max };
enum class UnaryOp { neg, exp, log, abs, sin, cos };

/// Broadcasting binary op (trailing-axis alignment, size-1 axes stretch).
/// Backward sums over the stretched axes. min/max pass the gradient to both
/// operands on ties.
template <typename T>
Tensor<T> elementwise(BinaryOp op, const Tensor<T>& a, const Tensor<T>& b);

template <typename T>
Tensor<T> elementwise(BinaryOp op, const Tensor<T>& a, T b) {
  return elementwise(op, a, Tensor<T>::scalar(b));
}

/// abs uses sign(x) as its derivative, 0 at x = 0.
template <typename T>
Tensor<T> elementwise(UnaryOp op, const Tensor<T>& a);

template <typename T> Tensor<T> add(const Tensor<T>& a, const Tensor<T>& b) { return elementwise(BinaryOp::add, a, b); }
template <typename T> Tensor<T> sub(const Tensor<T>& a, const Tensor<T>& b) { return elementwise(BinaryOp::sub, a, b); }
template <typename T> Tensor<T> mul(const Tensor<T>& a, const Tensor<T>& b) { return elementwise(BinaryOp::mul, a, b); }
template <typename T> Tensor<T> div(const Tensor<T>& a, const Tensor<T>& b) { return elementwise(BinaryOp::div, a, b); }
template <typename T> Tensor<T> pow(const Tensor<T>& a, const Tensor<T>& b) { return elementwise(BinaryOp::pow, a, b); }
template <typename T> Tensor<T> pow(const Tensor<T>& a, T b) { return elementwise(BinaryOp::pow, a, b); }
template <typename T> Tensor<T> minimum(const Tensor<T>& a, const Tensor<T>& b) { return elementwise(BinaryOp::min, a, b); }
template <typename T> Tensor<T> maximum(const Tensor<T>& a, const Tensor<T>& b) { return elementwise(BinaryOp::max, a, b); }

template <typename T> Tensor<T> neg(const Tensor<T>& a) { return elementwise(UnaryOp::neg, a); }
template <typename T> Tensor<T> exp(const Tensor<T>& a) { return elementwise(UnaryOp::exp, a); }
template <typename T> Tensor<T> log(const Tensor<T>& a) { return elementwise(UnaryOp::log, a); }
template <typename T> Tensor<T> abs(const Tensor<T>& a) { return elementwise(UnaryOp::abs, a); }
template <typename T> Tensor<T> sin(const Tensor<T>& a) { return elementwise(UnaryOp::sin, a); }
template <typename T> Tensor<T> cos(const Tensor<T>& a) { return elementwise(UnaryOp::cos, a); }

template <typename T> Tensor<T> operator+(const Tensor<T>& a, const Tensor<T>& b) { return add(a, b); }
template <typename T> Tensor<T> operator-(const Tensor<T>& a, const Tensor<T>& b) { return sub(a, b); }
template <typename T> Tensor<T> operator*(const Tensor<T>& a, const Tensor<T>& b) { return mul(a, b); }
template <typename T> Tensor<T> operator/(const Tensor<T>& a, const Tensor<T>& b) { return div(a, b); }
template <typename T> Tensor<T> operator-(const Tensor<T>& a) { return neg(a); }
template <typename T> Tensor<T> operator+(const Tensor<T>& a, T s) { return add(a, Tensor<T>::scalar(s)); }
template <typename T> Tensor<T> operator+(T s, const Tensor<T>& a) { return add(Tensor<T>::scalar(s), a); }
template <typename T> Tensor<T> operator-(const Tensor<T>& a, T s) { return sub(a, Tensor<T>::scalar(s)); }
template <typename T> Tensor<T> operator-(T s, const Tensor<T>& a) { return sub(Tensor<T>::scalar(s), a); }
template <typename T> Tensor<T> operator*(const Tensor<T>& a, T s) { return mul(a, Tensor<T>::scalar(s)); }
template <typename T> Tensor<T> operator*(T s, const Tensor<T>& a) { return mul(Tensor<T>::scalar(s), a); }
template <typename T> Tensor<T> operator/(const Tensor<T>& a, T s) { return div(a, Tensor<T>::scalar(s)); }
template <typename T> Tensor<T> operator/(T s, const Tensor<T>& a) { return div(Tensor<T>::scalar(s), a); }

/// min(max(x, lo), hi). Gradient 1 on [lo, hi] (boundaries included), 0
/// strictly outside.
template <typename T>
Tensor<T> clamp(const Tensor<T>& x, T lo, T hi);

enum class ReduceOp { sum, mean };

/// Reduces over `axes` (negative values count from the end; empty = all).
template <typename T>
Tensor<T> reduce(ReduceOp op, const Tensor<T>& x, std::vector<int> axes = {},
                 bool keep_dims = false);

template <typename T>
Tensor<T> sum(const Tensor<T>& x, std::vector<int> axes = {}, bool keep_dims = false) {
  return reduce(ReduceOp::sum, x, std::move(axes), keep_dims);
}

template <typename T>
Tensor<T> mean(const Tensor<T>& x, std::vector<int> axes = {}, bool keep_dims = false) {
  return reduce(ReduceOp::mean, x, std::move(axes), keep_dims);
}

/// Matrix product of rank-2 or batched rank-3 operands; batch axes broadcast
/// when one side has batch 1 (a rank-2 operand counts as batch 1).
template <typename T>
Tensor<T> matmul(const Tensor<T>& a, const Tensor<T>& b);

/// Swaps the last two axes.
template <typename T>
Tensor<T> transpose(const Tensor<T>& x);

template <typename T>
Tensor<T> reshape(const Tensor<T>& x, Shape shape);

template <typename T>
Tensor<T> broadcast_to(const Tensor<T>& x, const Shape& shape);

template <typename T>
Tensor<T> concat(const std::vector<Tensor<T>>& parts, std::size_t axis);

/// Rows of `x` along axis 0 in the order of `indices` (repeats allowed).
template <typename T>
Tensor<T> take(const Tensor<T>& x, const std::vector<std::size_t>& indices);

/// Copy of `base` whose rows `indices[k]` along axis 0 are replaced by
/// `rows[k]`. Indices must be distinct.
template <typename T>
Tensor<T> put_rows(const Tensor<T>& base, const std::vector<std::size_t>& indices,
                   const Tensor<T>& rows);

/// Reverses `x` along `axis`.
template <typename T>
Tensor<T> flip(const Tensor<T>& x, std::size_t axis);

/// A convolution kernel that is data, not a graph value.
template <typename T>
struct StaticKernel {
  std::size_t height = 1;
  std::size_t width = 1;
  std::size_t count = 1;  // 1 (shared by the batch) or N (one per sample)
  std::vector<T> values;  // count * height * width, row-major
};

/// Same-size zero-padded cross-correlation of each channel of an (N, C, H, W)
/// batch. Differentiable w.r.t. x only.
template <typename T>
Tensor<T> conv2d_fixed(const Tensor<T>& x, const StaticKernel<T>& kernel);

}  // namespace ddaug
