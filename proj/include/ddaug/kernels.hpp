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

// Raw data-parallel kernels behind the differentiable operations. Everything
// in ddaug::kernels is OpenMP-parallel; ddaug::kernels::reference holds plain
// serial versions of the same contracts, kept for cross-checking and for the
// kernel benchmark.
//
// Parallel loops only ever write disjoint output ranges and every output is
// accumulated in a fixed order, so results do not depend on thread count.

#include <cstddef>
#include <span>
#include <vector>

#include "ddaug/tensor.hpp"

namespace ddaug {

enum class Padding { zeros, border };

namespace kernels {

struct ImageExtents {
  std::size_t n, c, h, w;
  std::size_t plane() const { return h * w; }
};

struct VolumeExtents {
  std::size_t n, c, d, h, w;
  std::size_t volume() const { return d * h * w; }
};

/// Output shape plus per-operand element strides (0 along stretched axes),
/// both operands left-padded to the output rank.
struct BroadcastPlan {
  Shape out;
  std::vector<std::size_t> a_strides;
  std::vector<std::size_t> b_strides;
  bool same_shape = false;
};

BroadcastPlan plan_broadcast(const Shape& a, const Shape& b);

/// out[i] = f(a[ia], b[ib]) over the broadcast index space.
template <typename T, typename F>
void broadcast_map(const BroadcastPlan& plan, const T* a, const T* b, T* out, F f) {
  const std::size_t total = shape_numel(plan.out);
  if (total == 0) return;
  if (plan.same_shape) {
    const auto n = static_cast<std::ptrdiff_t>(total);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) out[i] = f(a[i], b[i]);
    return;
  }
  const std::size_t rank = plan.out.size();
  const std::size_t inner = rank ? plan.out[rank - 1] : 1;
  const std::size_t sa_in = rank ? plan.a_strides[rank - 1] : 0;
  const std::size_t sb_in = rank ? plan.b_strides[rank - 1] : 0;
  const auto rows = static_cast<std::ptrdiff_t>(total / inner);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t r = 0; r < rows; ++r) {
    std::size_t rem = static_cast<std::size_t>(r);
    std::size_t oa = 0, ob = 0;
    for (std::size_t ax = rank - 1; ax-- > 0;) {
      const std::size_t idx = rem % plan.out[ax];
      rem /= plan.out[ax];
      oa += idx * plan.a_strides[ax];
      ob += idx * plan.b_strides[ax];
    }
    T* o = out + static_cast<std::size_t>(r) * inner;
    for (std::size_t j = 0; j < inner; ++j) o[j] = f(a[oa + j * sa_in], b[ob + j * sb_in]);
  }
}

/// Sums `in` (shape `shape`) over the axes flagged in `reduce`; `out` holds
/// the kept axes in order. Accumulation is in double.
template <typename T>
void sum_axes(const T* in, const Shape& shape, const std::vector<bool>& reduce, T* out);

/// Normalized sampling coordinates for every output location, from per-sample
/// homogeneous matrices (row-major, (dims+1)^2 entries each) applied to the
/// canonical mesh, with perspective divide. `extents` is (H, W) or (D, H, W).
template <typename T>
void affine_grid(const T* theta, std::size_t n, const Shape& extents, T* grid);

/// Accumulates d(loss)/d(theta) given d(loss)/d(grid).
template <typename T>
void affine_grid_backward(const T* theta, std::size_t n, const Shape& extents,
                          const T* grad_grid, T* grad_theta);

template <typename T>
void grid_sample2d(const T* x, const ImageExtents& in, const T* grid, std::size_t out_h,
                   std::size_t out_w, Padding padding, T* out);

/// Either gradient pointer may be null to skip that gradient.
template <typename T>
void grid_sample2d_backward(const T* x, const ImageExtents& in, const T* grid,
                            std::size_t out_h, std::size_t out_w, Padding padding,
                            const T* grad_out, T* grad_x, T* grad_grid);

template <typename T>
void grid_sample3d(const T* x, const VolumeExtents& in, const T* grid, std::size_t out_d,
                   std::size_t out_h, std::size_t out_w, Padding padding, T* out);

template <typename T>
void grid_sample3d_backward(const T* x, const VolumeExtents& in, const T* grid,
                            std::size_t out_d, std::size_t out_h, std::size_t out_w,
                            Padding padding, const T* grad_out, T* grad_x, T* grad_grid);

/// Zero-padded same-size cross-correlation of every channel plane with an odd
/// kh x kw kernel. With `per_sample` the kernel buffer holds one kernel per
/// batch element, otherwise a single kernel shared by the batch.
template <typename T>
void correlate2d(const T* x, const ImageExtents& ext, const T* kernel, bool per_sample,
                 std::size_t kh, std::size_t kw, T* out);

namespace reference {

template <typename T, typename F>
void broadcast_map(const BroadcastPlan& plan, const T* a, const T* b, T* out, F f) {
  const std::size_t total = shape_numel(plan.out);
  const std::size_t rank = plan.out.size();
  for (std::size_t i = 0; i < total; ++i) {
    std::size_t rem = i, oa = 0, ob = 0;
    for (std::size_t ax = rank; ax-- > 0;) {
      const std::size_t idx = rem % plan.out[ax];
      rem /= plan.out[ax];
      oa += idx * plan.a_strides[ax];
      ob += idx * plan.b_strides[ax];
    }
    out[i] = f(a[oa], b[ob]);
  }
}

template <typename T>
void sum_axes(const T* in, const Shape& shape, const std::vector<bool>& reduce, T* out);

template <typename T>
void affine_grid(const T* theta, std::size_t n, const Shape& extents, T* grid);

template <typename T>
void grid_sample2d(const T* x, const ImageExtents& in, const T* grid, std::size_t out_h,
                   std::size_t out_w, Padding padding, T* out);

template <typename T>
void grid_sample2d_backward(const T* x, const ImageExtents& in, const T* grid,
                            std::size_t out_h, std::size_t out_w, Padding padding,
                            const T* grad_out, T* grad_x, T* grad_grid);

template <typename T>
void grid_sample3d(const T* x, const VolumeExtents& in, const T* grid, std::size_t out_d,
                   std::size_t out_h, std::size_t out_w, Padding padding, T* out);

template <typename T>
void correlate2d(const T* x, const ImageExtents& ext, const T* kernel, bool per_sample,
                 std::size_t kh, std::size_t kw, T* out);

}  // namespace reference

/// Normalized coordinate of index `i` along an axis of `extent` points:
/// -1 at the first pixel center, +1 at the last, 0 for a single point.
template <typename T>
inline T mesh_coord(std::size_t i, std::size_t extent) {
  if (extent <= 1) return T(0);
  return T(-1) + T(2) * static_cast<T>(i) / static_cast<T>(extent - 1);
}

}  // namespace kernels
}  // namespace ddaug
