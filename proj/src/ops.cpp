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

#include "ddaug/ops.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "ddaug/kernels.hpp"

namespace ddaug {

namespace {

template <typename T>
using GradIn = std::vector<std::vector<T>>;

// Sums a buffer laid out over `out_shape` down to `target` (which broadcasts
// to out_shape).
template <typename T>
std::vector<T> reduce_to_shape(const std::vector<T>& contrib, const Shape& out_shape,
                               const Shape& target) {
  if (out_shape == target) return contrib;
  std::vector<bool> flags(out_shape.size(), false);
  const std::size_t pad = out_shape.size() - target.size();
  for (std::size_t i = 0; i < out_shape.size(); ++i) {
    const std::size_t t = i < pad ? 1 : target[i - pad];
    flags[i] = (t == 1 && out_shape[i] != 1);
  }
  std::vector<T> out(shape_numel(target));
  kernels::sum_axes(contrib.data(), out_shape, flags, out.data());
  return out;
}

// Plan that reads only the first operand, stretched to `dst`.
kernels::BroadcastPlan expand_plan(const Shape& src, const Shape& dst) {
  auto plan = kernels::plan_broadcast(src, dst);
  std::fill(plan.b_strides.begin(), plan.b_strides.end(), 0);
  plan.same_shape = (src == plan.out);
  return plan;
}

template <typename T>
void add_into(std::vector<T>& dst, const std::vector<T>& src) {
  for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += src[i];
}

template <typename T>
T binary_forward(BinaryOp op, T a, T b) {
  switch (op) {
    case BinaryOp::add: return a + b;
    case BinaryOp::sub: return a - b;
    case BinaryOp::mul: return a * b;
    case BinaryOp::div: return a / b;
    case BinaryOp::pow: return std::pow(a, b);
    case BinaryOp::min: return a <= b ? a : b;
    case BinaryOp::max: return a >= b ? a : b;
  }
  return T(0);
}

// Partial derivatives of `op` at (a, b) with result o.
template <typename T>
void binary_partials(BinaryOp op, T a, T b, T o, T& da, T& db) {
  switch (op) {
    case BinaryOp::add: da = T(1); db = T(1); return;
    case BinaryOp::sub: da = T(1); db = T(-1); return;
    case BinaryOp::mul: da = b; db = a; return;
    case BinaryOp::div: da = T(1) / b; db = -a / (b * b); return;
    case BinaryOp::pow:
      da = b * std::pow(a, b - T(1));
      db = o * std::log(a);
      return;
    case BinaryOp::min: da = a <= b ? T(1) : T(0); db = b <= a ? T(1) : T(0); return;
    case BinaryOp::max: da = a >= b ? T(1) : T(0); db = b >= a ? T(1) : T(0); return;
  }
}

const char* binary_name(BinaryOp op) {
  switch (op) {
    case BinaryOp::add: return "add";
    case BinaryOp::sub: return "sub";
    case BinaryOp::mul: return "mul";
    case BinaryOp::div: return "div";
    case BinaryOp::pow: return "pow";
    case BinaryOp::min: return "min";
    case BinaryOp::max: return "max";
  }
  return "binary";
}

std::vector<std::size_t> normalize_axes(const std::vector<int>& axes, std::size_t rank) {
  std::set<std::size_t> out;
  if (axes.empty()) {
    for (std::size_t i = 0; i < rank; ++i) out.insert(i);
  }
  for (int a : axes) {
    const long r = static_cast<long>(rank);
    const long v = a < 0 ? a + r : a;
    if (v < 0 || v >= r)
      throw ShapeError("axis " + std::to_string(a) + " invalid for rank " + std::to_string(rank));
    if (!out.insert(static_cast<std::size_t>(v)).second)
      throw ShapeError("axis " + std::to_string(a) + " repeated in reduction");
  }
  return {out.begin(), out.end()};
}

}  // namespace

template <typename T>
Tensor<T> elementwise(BinaryOp op, const Tensor<T>& a, const Tensor<T>& b) {
  const auto plan = kernels::plan_broadcast(a.shape(), b.shape());
  std::vector<T> out(shape_numel(plan.out));
  const T* pa = a.data().data();
  const T* pb = b.data().data();
  switch (op) {
    case BinaryOp::add: kernels::broadcast_map(plan, pa, pb, out.data(), [](T x, T y) { return x + y; }); break;
    case BinaryOp::sub: kernels::broadcast_map(plan, pa, pb, out.data(), [](T x, T y) { return x - y; }); break;
    case BinaryOp::mul: kernels::broadcast_map(plan, pa, pb, out.data(), [](T x, T y) { return x * y; }); break;
    case BinaryOp::div: kernels::broadcast_map(plan, pa, pb, out.data(), [](T x, T y) { return x / y; }); break;
    default:
      kernels::broadcast_map(plan, pa, pb, out.data(),
                             [op](T x, T y) { return binary_forward(op, x, y); });
  }
  if (!detail::any_requires_grad<T>({&a, &b}))
    return Tensor<T>(plan.out, std::move(out));

  auto ai = a.impl(), bi = b.impl();
  auto backward = [op, plan, ai, bi](std::span<const T> g, GradIn<T>& gin) {
    const std::size_t total = g.size();
    std::vector<T> in_a(total), in_b(total), res(total);
    kernels::broadcast_map(plan, ai->data.data(), bi->data.data(), in_a.data(),
                           [](T x, T) { return x; });
    kernels::broadcast_map(plan, ai->data.data(), bi->data.data(), in_b.data(),
                           [](T, T y) { return y; });
    std::vector<T> ca(gin[0].empty() ? 0 : total), cb(gin[1].empty() ? 0 : total);
    const bool want_a = !ca.empty(), want_b = !cb.empty();
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(total); ++i) {
      T da = T(0), db = T(0);
      const T o = binary_forward(op, in_a[i], in_b[i]);
      binary_partials(op, in_a[i], in_b[i], o, da, db);
      if (want_a) ca[i] = g[i] * da;
      if (want_b) cb[i] = g[i] * db;
    }
    if (want_a) add_into(gin[0], reduce_to_shape(ca, plan.out, ai->shape));
    if (want_b) add_into(gin[1], reduce_to_shape(cb, plan.out, bi->shape));
  };
  return detail::make_result<T>(plan.out, std::move(out), {a, b}, binary_name(op),
                                std::move(backward));
}

template <typename T>
Tensor<T> elementwise(UnaryOp op, const Tensor<T>& a) {
  const std::size_t n = a.numel();
  std::vector<T> out(n);
  const T* x = a.data().data();
  auto apply = [op](T v) -> T {
    switch (op) {
      case UnaryOp::neg: return -v;
      case UnaryOp::exp: return std::exp(v);
      case UnaryOp::log: return std::log(v);
      case UnaryOp::abs: return std::abs(v);
      case UnaryOp::sin: return std::sin(v);
      case UnaryOp::cos: return std::cos(v);
    }
    return v;
  };
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) out[i] = apply(x[i]);

  static constexpr const char* names[] = {"neg", "exp", "log", "abs", "sin", "cos"};
  auto ai = a.impl();
  auto backward = [op, ai](std::span<const T> g, GradIn<T>& gin) {
    const T* v = ai->data.data();
    auto& ga = gin[0];
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(ga.size()); ++i) {
      T d = T(0);
      switch (op) {
        case UnaryOp::neg: d = T(-1); break;
        case UnaryOp::exp: d = std::exp(v[i]); break;
        case UnaryOp::log: d = T(1) / v[i]; break;
        case UnaryOp::abs: d = v[i] > T(0) ? T(1) : (v[i] < T(0) ? T(-1) : T(0)); break;
        case UnaryOp::sin: d = std::cos(v[i]); break;
        case UnaryOp::cos: d = -std::sin(v[i]); break;
      }
      ga[i] += g[i] * d;
    }
  };
  return detail::make_result<T>(a.shape(), std::move(out), {a}, names[static_cast<int>(op)],
                                std::move(backward));
}

template <typename T>
Tensor<T> clamp(const Tensor<T>& x, T lo, T hi) {
  if (!(lo <= hi))
    throw ArgumentError("clamp bounds out of order: lo=" + std::to_string(lo) +
                        " > hi=" + std::to_string(hi));
  const std::size_t n = x.numel();
  std::vector<T> out(n);
  const T* v = x.data().data();
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i)
    out[i] = std::min(std::max(v[i], lo), hi);
  auto xi = x.impl();
  return detail::make_result<T>(
      x.shape(), std::move(out), {x}, "clamp", [xi, lo, hi](std::span<const T> g, GradIn<T>& gin) {
        const T* v = xi->data.data();
        for (std::size_t i = 0; i < g.size(); ++i)
          if (lo <= v[i] && v[i] <= hi) gin[0][i] += g[i];
      });
}

template <typename T>
Tensor<T> reduce(ReduceOp op, const Tensor<T>& x, std::vector<int> axes, bool keep_dims) {
  const Shape& shape = x.shape();
  const auto red = normalize_axes(axes, shape.size());
  std::vector<bool> flags(shape.size(), false);
  std::size_t count = 1;
  for (std::size_t a : red) {
    flags[a] = true;
    count *= shape[a];
  }
  Shape kept_keep = shape, out_shape;
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (flags[i]) {
      kept_keep[i] = 1;
      if (keep_dims) out_shape.push_back(1);
    } else {
      out_shape.push_back(shape[i]);
    }
  }
  std::vector<T> out(shape_numel(out_shape));
  kernels::sum_axes(x.data().data(), shape, flags, out.data());
  const T scale = op == ReduceOp::mean ? T(1) / static_cast<T>(count) : T(1);
  if (op == ReduceOp::mean)
    for (T& v : out) v *= scale;

  auto xi = x.impl();
  return detail::make_result<T>(
      out_shape, std::move(out), {x}, op == ReduceOp::sum ? "sum" : "mean",
      [xi, kept_keep, scale](std::span<const T> g, GradIn<T>& gin) {
        const auto plan = expand_plan(kept_keep, xi->shape);
        std::vector<T> spread(gin[0].size());
        kernels::broadcast_map(plan, g.data(), g.data(), spread.data(),
                               [scale](T v, T) { return v * scale; });
        add_into(gin[0], spread);
      });
}

template <typename T>
Tensor<T> matmul(const Tensor<T>& a, const Tensor<T>& b) {
  const std::size_t ra = a.rank(), rb = b.rank();
  if ((ra != 2 && ra != 3) || (rb != 2 && rb != 3))
    throw ShapeError("matmul needs rank-2 or rank-3 operands, got " + shape_str(a.shape()) +
                     " and " + shape_str(b.shape()));
  const std::size_t ba = ra == 3 ? a.dim(0) : 1, bb = rb == 3 ? b.dim(0) : 1;
  const std::size_t M = a.dim(ra - 2), K = a.dim(ra - 1);
  const std::size_t K2 = b.dim(rb - 2), P = b.dim(rb - 1);
  if (K != K2 || (ba != bb && ba != 1 && bb != 1))
    throw ShapeError("matmul shape mismatch: " + shape_str(a.shape()) + " x " +
                     shape_str(b.shape()));
  const std::size_t B = std::max(ba, bb);
  Shape out_shape = (ra == 2 && rb == 2) ? Shape{M, P} : Shape{B, M, P};
  std::vector<T> out(B * M * P);
  const T* pa = a.data().data();
  const T* pb = b.data().data();
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t r = 0; r < static_cast<std::ptrdiff_t>(B * M); ++r) {
    const std::size_t bi = static_cast<std::size_t>(r) / M, i = static_cast<std::size_t>(r) % M;
    const T* arow = pa + (ba == 1 ? 0 : bi) * M * K + i * K;
    const T* bm = pb + (bb == 1 ? 0 : bi) * K * P;
    T* orow = out.data() + bi * M * P + i * P;
    for (std::size_t j = 0; j < P; ++j) {
      T acc = T(0);
      for (std::size_t k = 0; k < K; ++k) acc += arow[k] * bm[k * P + j];
      orow[j] = acc;
    }
  }
  auto ai = a.impl(), bi_ = b.impl();
  return detail::make_result<T>(
      out_shape, std::move(out), {a, b}, "matmul",
      [ai, bi_, B, ba, bb, M, K, P](std::span<const T> g, GradIn<T>& gin) {
        const T* pa = ai->data.data();
        const T* pb = bi_->data.data();
        for (std::size_t bi = 0; bi < B; ++bi) {
          const T* gm = g.data() + bi * M * P;
          const T* am = pa + (ba == 1 ? 0 : bi) * M * K;
          const T* bm = pb + (bb == 1 ? 0 : bi) * K * P;
          if (!gin[0].empty()) {
            T* ga = gin[0].data() + (ba == 1 ? 0 : bi) * M * K;
            for (std::size_t i = 0; i < M; ++i)
              for (std::size_t k = 0; k < K; ++k) {
                T acc = T(0);
                for (std::size_t j = 0; j < P; ++j) acc += gm[i * P + j] * bm[k * P + j];
                ga[i * K + k] += acc;
              }
          }
          if (!gin[1].empty()) {
            T* gb = gin[1].data() + (bb == 1 ? 0 : bi) * K * P;
            for (std::size_t k = 0; k < K; ++k)
              for (std::size_t j = 0; j < P; ++j) {
                T acc = T(0);
                for (std::size_t i = 0; i < M; ++i) acc += am[i * K + k] * gm[i * P + j];
                gb[k * P + j] += acc;
              }
          }
        }
      });
}

template <typename T>
Tensor<T> transpose(const Tensor<T>& x) {
  if (x.rank() < 2) throw ShapeError("transpose needs rank >= 2, got " + shape_str(x.shape()));
  Shape shape = x.shape();
  const std::size_t r = shape.size();
  const std::size_t R = shape[r - 2], C = shape[r - 1], batch = x.numel() / std::max<std::size_t>(R * C, 1);
  std::swap(shape[r - 2], shape[r - 1]);
  std::vector<T> out(x.numel());
  const T* v = x.data().data();
  for (std::size_t b = 0; b < batch; ++b)
    for (std::size_t i = 0; i < R; ++i)
      for (std::size_t j = 0; j < C; ++j) out[b * R * C + j * R + i] = v[b * R * C + i * C + j];
  return detail::make_result<T>(shape, std::move(out), {x}, "transpose",
                                [batch, R, C](std::span<const T> g, GradIn<T>& gin) {
                                  for (std::size_t b = 0; b < batch; ++b)
                                    for (std::size_t i = 0; i < R; ++i)
                                      for (std::size_t j = 0; j < C; ++j)
                                        gin[0][b * R * C + i * C + j] += g[b * R * C + j * R + i];
                                });
}

template <typename T>
Tensor<T> reshape(const Tensor<T>& x, Shape shape) {
  if (shape_numel(shape) != x.numel())
    throw ShapeError("cannot reshape " + shape_str(x.shape()) + " to " + shape_str(shape));
  return detail::make_result<T>(std::move(shape), x.to_vector(), {x}, "reshape",
                                [](std::span<const T> g, GradIn<T>& gin) {
                                  for (std::size_t i = 0; i < g.size(); ++i) gin[0][i] += g[i];
                                });
}

template <typename T>
Tensor<T> broadcast_to(const Tensor<T>& x, const Shape& shape) {
  const auto plan = expand_plan(x.shape(), shape);
  if (plan.out != shape)
    throw ShapeError("cannot broadcast " + shape_str(x.shape()) + " to " + shape_str(shape));
  std::vector<T> out(shape_numel(shape));
  kernels::broadcast_map(plan, x.data().data(), x.data().data(), out.data(),
                         [](T v, T) { return v; });
  Shape src = x.shape();
  return detail::make_result<T>(shape, std::move(out), {x}, "broadcast_to",
                                [src, shape](std::span<const T> g, GradIn<T>& gin) {
                                  std::vector<T> gv(g.begin(), g.end());
                                  add_into(gin[0], reduce_to_shape(gv, shape, src));
                                });
}

template <typename T>
Tensor<T> concat(const std::vector<Tensor<T>>& parts, std::size_t axis) {
  if (parts.empty()) throw ArgumentError("concat of an empty list");
  const Shape& first = parts[0].shape();
  if (axis >= first.size())
    throw ShapeError("concat axis " + std::to_string(axis) + " invalid for rank " +
                     std::to_string(first.size()));
  Shape out_shape = first;
  out_shape[axis] = 0;
  for (const auto& p : parts) {
    const Shape& s = p.shape();
    bool ok = s.size() == first.size();
    for (std::size_t i = 0; ok && i < s.size(); ++i) ok = (i == axis) || s[i] == first[i];
    if (!ok)
      throw ShapeError("concat shape mismatch: " + shape_str(first) + " vs " + shape_str(s));
    out_shape[axis] += s[axis];
  }
  std::size_t outer = 1, inner = 1;
  for (std::size_t i = 0; i < axis; ++i) outer *= first[i];
  for (std::size_t i = axis + 1; i < first.size(); ++i) inner *= first[i];
  const std::size_t out_row = out_shape[axis] * inner;
  std::vector<T> out(shape_numel(out_shape));
  std::vector<std::size_t> offsets;
  std::size_t off = 0;
  for (const auto& p : parts) {
    offsets.push_back(off);
    const std::size_t row = p.dim(axis) * inner;
    const T* v = p.data().data();
    for (std::size_t o = 0; o < outer; ++o)
      std::copy(v + o * row, v + (o + 1) * row, out.data() + o * out_row + off);
    off += row;
  }
  std::vector<std::size_t> rows;
  for (const auto& p : parts) rows.push_back(p.dim(axis) * inner);
  return detail::make_result<T>(out_shape, std::move(out), parts, "concat",
                                [offsets, rows, outer, out_row](std::span<const T> g, GradIn<T>& gin) {
                                  for (std::size_t k = 0; k < rows.size(); ++k) {
                                    if (gin[k].empty()) continue;
                                    for (std::size_t o = 0; o < outer; ++o)
                                      for (std::size_t e = 0; e < rows[k]; ++e)
                                        gin[k][o * rows[k] + e] += g[o * out_row + offsets[k] + e];
                                  }
                                });
}

template <typename T>
Tensor<T> take(const Tensor<T>& x, const std::vector<std::size_t>& indices) {
  if (x.rank() == 0) throw ShapeError("take needs rank >= 1");
  const std::size_t rows = x.dim(0), row = rows ? x.numel() / rows : 0;
  for (std::size_t i : indices)
    if (i >= rows)
      throw ArgumentError("take index " + std::to_string(i) + " out of range for " +
                          std::to_string(rows) + " rows");
  Shape out_shape = x.shape();
  out_shape[0] = indices.size();
  std::vector<T> out(indices.size() * row);
  const T* v = x.data().data();
  for (std::size_t k = 0; k < indices.size(); ++k)
    std::copy(v + indices[k] * row, v + (indices[k] + 1) * row, out.data() + k * row);
  return detail::make_result<T>(out_shape, std::move(out), {x}, "take",
                                [indices, row](std::span<const T> g, GradIn<T>& gin) {
                                  for (std::size_t k = 0; k < indices.size(); ++k)
                                    for (std::size_t e = 0; e < row; ++e)
                                      gin[0][indices[k] * row + e] += g[k * row + e];
                                });
}

template <typename T>
Tensor<T> put_rows(const Tensor<T>& base, const std::vector<std::size_t>& indices,
                   const Tensor<T>& rows) {
  if (base.rank() == 0 || rows.rank() != base.rank())
    throw ShapeError("put_rows rank mismatch: " + shape_str(base.shape()) + " vs " +
                     shape_str(rows.shape()));
  for (std::size_t i = 1; i < base.rank(); ++i)
    if (base.dim(i) != rows.dim(i))
      throw ShapeError("put_rows row shape mismatch: " + shape_str(base.shape()) + " vs " +
                       shape_str(rows.shape()));
  if (rows.dim(0) != indices.size())
    throw ShapeError("put_rows: " + std::to_string(indices.size()) + " indices for " +
                     std::to_string(rows.dim(0)) + " rows");
  const std::size_t n = base.dim(0), row = n ? base.numel() / n : 0;
  std::vector<bool> used(n, false);
  for (std::size_t i : indices) {
    if (i >= n) throw ArgumentError("put_rows index " + std::to_string(i) + " out of range");
    if (used[i]) throw ArgumentError("put_rows index " + std::to_string(i) + " repeated");
    used[i] = true;
  }
  std::vector<T> out = base.to_vector();
  const T* r = rows.data().data();
  for (std::size_t k = 0; k < indices.size(); ++k)
    std::copy(r + k * row, r + (k + 1) * row, out.data() + indices[k] * row);
  return detail::make_result<T>(base.shape(), std::move(out), {base, rows}, "put_rows",
                                [indices, used, row](std::span<const T> g, GradIn<T>& gin) {
                                  if (!gin[0].empty())
                                    for (std::size_t i = 0; i < used.size(); ++i)
                                      if (!used[i])
                                        for (std::size_t e = 0; e < row; ++e)
                                          gin[0][i * row + e] += g[i * row + e];
                                  if (!gin[1].empty())
                                    for (std::size_t k = 0; k < indices.size(); ++k)
                                      for (std::size_t e = 0; e < row; ++e)
                                        gin[1][k * row + e] += g[indices[k] * row + e];
                                });
}

template <typename T>
Tensor<T> flip(const Tensor<T>& x, std::size_t axis) {
  if (axis >= x.rank())
    throw ShapeError("flip axis " + std::to_string(axis) + " invalid for " + shape_str(x.shape()));
  const Shape& s = x.shape();
  std::size_t outer = 1, inner = 1;
  for (std::size_t i = 0; i < axis; ++i) outer *= s[i];
  for (std::size_t i = axis + 1; i < s.size(); ++i) inner *= s[i];
  const std::size_t L = s[axis];
  auto permute = [outer, inner, L](const T* src, T* dst, bool accumulate) {
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t o = 0; o < static_cast<std::ptrdiff_t>(outer); ++o)
      for (std::size_t l = 0; l < L; ++l) {
        const T* a = src + (static_cast<std::size_t>(o) * L + l) * inner;
        T* b = dst + (static_cast<std::size_t>(o) * L + (L - 1 - l)) * inner;
        for (std::size_t e = 0; e < inner; ++e) b[e] = accumulate ? b[e] + a[e] : a[e];
      }
  };
  std::vector<T> out(x.numel());
  permute(x.data().data(), out.data(), false);
  return detail::make_result<T>(s, std::move(out), {x}, "flip",
                                [permute](std::span<const T> g, GradIn<T>& gin) {
                                  permute(g.data(), gin[0].data(), true);
                                });
}

template <typename T>
Tensor<T> conv2d_fixed(const Tensor<T>& x, const StaticKernel<T>& kernel) {
  if (x.rank() != 4) throw ShapeError("conv2d_fixed needs (N, C, H, W), got " + shape_str(x.shape()));
  if (kernel.height % 2 == 0 || kernel.width % 2 == 0)
    throw ArgumentError("conv2d_fixed needs odd kernel extents, got " +
                        std::to_string(kernel.height) + "x" + std::to_string(kernel.width));
  const kernels::ImageExtents ext{x.dim(0), x.dim(1), x.dim(2), x.dim(3)};
  if (kernel.count != 1 && kernel.count != ext.n)
    throw ShapeError("conv2d_fixed: " + std::to_string(kernel.count) + " kernels for batch of " +
                     std::to_string(ext.n));
  if (kernel.values.size() != kernel.count * kernel.height * kernel.width)
    throw ArgumentError("conv2d_fixed: kernel value count does not match its extents");
  std::vector<T> out(x.numel());
  kernels::correlate2d(x.data().data(), ext, kernel.values.data(), kernel.count != 1,
                       kernel.height, kernel.width, out.data());

  // Backward is correlation with the point-reflected kernel.
  StaticKernel<T> flipped = kernel;
  const std::size_t taps = kernel.height * kernel.width;
  for (std::size_t k = 0; k < kernel.count; ++k)
    std::reverse(flipped.values.begin() + k * taps, flipped.values.begin() + (k + 1) * taps);
  return detail::make_result<T>(
      x.shape(), std::move(out), {x}, "conv2d_fixed",
      [ext, flipped](std::span<const T> g, GradIn<T>& gin) {
        std::vector<T> gx(gin[0].size());
        kernels::correlate2d(g.data(), ext, flipped.values.data(), flipped.count != 1,
                             flipped.height, flipped.width, gx.data());
        add_into(gin[0], gx);
      });
}

#define DDAUG_INSTANTIATE(T)                                                                 \
  template Tensor<T> elementwise<T>(BinaryOp, const Tensor<T>&, const Tensor<T>&);           \
  template Tensor<T> elementwise<T>(UnaryOp, const Tensor<T>&);                              \
  template Tensor<T> clamp<T>(const Tensor<T>&, T, T);                                       \
  template Tensor<T> reduce<T>(ReduceOp, const Tensor<T>&, std::vector<int>, bool);          \
  template Tensor<T> matmul<T>(const Tensor<T>&, const Tensor<T>&);                          \
  template Tensor<T> transpose<T>(const Tensor<T>&);                                         \
  template Tensor<T> reshape<T>(const Tensor<T>&, Shape);                                    \
  template Tensor<T> broadcast_to<T>(const Tensor<T>&, const Shape&);                        \
  template Tensor<T> concat<T>(const std::vector<Tensor<T>>&, std::size_t);                  \
  template Tensor<T> take<T>(const Tensor<T>&, const std::vector<std::size_t>&);             \
  template Tensor<T> put_rows<T>(const Tensor<T>&, const std::vector<std::size_t>&,          \
                                 const Tensor<T>&);                                          \
  template Tensor<T> flip<T>(const Tensor<T>&, std::size_t);                                 \
  template Tensor<T> conv2d_fixed<T>(const Tensor<T>&, const StaticKernel<T>&);

DDAUG_INSTANTIATE(float)
DDAUG_INSTANTIATE(double)
#undef DDAUG_INSTANTIATE

}  // namespace ddaug
