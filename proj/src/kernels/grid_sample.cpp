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

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "ddaug/kernels.hpp"

namespace ddaug::kernels {

namespace {

// Coordinates within this many ulps of a pixel center are snapped onto it, so
// flips, right-angle rotations, and integer crops read pixels exactly.
template <typename T>
constexpr T kSnap = T(16) * std::numeric_limits<T>::epsilon();

template <typename T>
struct AxisTap {
  std::ptrdiff_t i0 = 0;
  T w0 = 0, w1 = 0;
  T dcoord = 0;  // d(pixel coord)/d(normalized coord); 0 where border clamping holds
};

template <typename T>
inline bool make_tap(T g, std::size_t extent, Padding pad, AxisTap<T>& tap) {
  if (!std::isfinite(g)) return false;
  const T half = T(0.5) * static_cast<T>(extent - 1);
  const T last = static_cast<T>(extent - 1);
  T ix = (g + T(1)) * half;
  tap.dcoord = half;
  if (pad == Padding::border) {
    if (ix < T(0)) {
      ix = T(0);
      tap.dcoord = T(0);
    } else if (ix > last) {
      ix = last;
      tap.dcoord = T(0);
    }
  } else {
    // More than one pixel outside, every tap reads padding.
    ix = std::clamp(ix, T(-2), last + T(2));
  }
  const T r = std::nearbyint(ix);
  if (std::abs(ix - r) <= kSnap<T> * std::max(T(1), std::abs(ix))) ix = r;
  const T f = std::floor(ix);
  tap.i0 = static_cast<std::ptrdiff_t>(f);
  tap.w1 = ix - f;
  tap.w0 = T(1) - tap.w1;
  return true;
}

inline bool resolve(std::ptrdiff_t i, std::size_t extent, Padding pad, std::size_t& out) {
  if (i >= 0 && i < static_cast<std::ptrdiff_t>(extent)) {
    out = static_cast<std::size_t>(i);
    return true;
  }
  if (pad == Padding::border) {
    out = i < 0 ? 0 : extent - 1;
    return true;
  }
  return false;
}

// Four bilinear corners ordered (y0,x0), (y0,x1), (y1,x0), (y1,x1).
template <typename T>
struct Corners2 {
  AxisTap<T> tx, ty;
  std::array<std::size_t, 4> off{};
  std::array<bool, 4> valid{};
  std::array<T, 4> w{};
};

template <typename T>
inline bool corners2(T gx, T gy, std::size_t H, std::size_t W, Padding pad, Corners2<T>& c) {
  if (!make_tap(gx, W, pad, c.tx) || !make_tap(gy, H, pad, c.ty)) return false;
  for (int k = 0; k < 4; ++k) {
    const int dy = k >> 1, dx = k & 1;
    std::size_t yi = 0, xi = 0;
    c.valid[k] = resolve(c.ty.i0 + dy, H, pad, yi) && resolve(c.tx.i0 + dx, W, pad, xi);
    c.off[k] = yi * W + xi;
    c.w[k] = (dy ? c.ty.w1 : c.ty.w0) * (dx ? c.tx.w1 : c.tx.w0);
  }
  return true;
}

template <typename T>
struct Corners3 {
  AxisTap<T> tx, ty, tz;
  std::array<std::size_t, 8> off{};
  std::array<bool, 8> valid{};
  std::array<T, 8> w{};
};

// Corner k = (dz << 2) | (dy << 1) | dx.
template <typename T>
inline bool corners3(T gx, T gy, T gz, std::size_t D, std::size_t H, std::size_t W, Padding pad,
                     Corners3<T>& c) {
  if (!make_tap(gx, W, pad, c.tx) || !make_tap(gy, H, pad, c.ty) || !make_tap(gz, D, pad, c.tz))
    return false;
  for (int k = 0; k < 8; ++k) {
    const int dz = k >> 2, dy = (k >> 1) & 1, dx = k & 1;
    std::size_t zi = 0, yi = 0, xi = 0;
    c.valid[k] = resolve(c.tz.i0 + dz, D, pad, zi) && resolve(c.ty.i0 + dy, H, pad, yi) &&
                 resolve(c.tx.i0 + dx, W, pad, xi);
    c.off[k] = (zi * H + yi) * W + xi;
    c.w[k] = (dz ? c.tz.w1 : c.tz.w0) * (dy ? c.ty.w1 : c.ty.w0) * (dx ? c.tx.w1 : c.tx.w0);
  }
  return true;
}

}  // namespace

template <typename T>
void affine_grid(const T* theta, std::size_t n, const Shape& extents, T* grid) {
  const std::size_t dims = extents.size();
  const std::size_t m = dims + 1;
  const std::size_t points = shape_numel(extents);
  const auto total = static_cast<std::ptrdiff_t>(n * points);

#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t flat = 0; flat < total; ++flat) {
    const std::size_t b = static_cast<std::size_t>(flat) / points;
    std::size_t rem = static_cast<std::size_t>(flat) % points;
    std::array<T, 4> p{};  // (x, y[, z], 1)
    for (std::size_t ax = dims; ax-- > 0;) {
      // extents are ordered (.., H, W): the last axis is x.
      const std::size_t idx = rem % extents[ax];
      rem /= extents[ax];
      p[dims - 1 - ax] = mesh_coord<T>(idx, extents[ax]);
    }
    p[dims] = T(1);
    const T* th = theta + b * m * m;
    std::array<T, 4> q{};
    for (std::size_t r = 0; r < m; ++r) {
      T acc = T(0);
      for (std::size_t j = 0; j < m; ++j) acc += th[r * m + j] * p[j];
      q[r] = acc;
    }
    T* g = grid + static_cast<std::size_t>(flat) * dims;
    for (std::size_t k = 0; k < dims; ++k) g[k] = q[k] / q[dims];
  }
}

template <typename T>
void affine_grid_backward(const T* theta, std::size_t n, const Shape& extents,
                          const T* grad_grid, T* grad_theta) {
  const std::size_t dims = extents.size();
  const std::size_t m = dims + 1;
  const std::size_t points = shape_numel(extents);

#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t bi = 0; bi < static_cast<std::ptrdiff_t>(n); ++bi) {
    const auto b = static_cast<std::size_t>(bi);
    const T* th = theta + b * m * m;
    std::array<double, 16> acc{};
    for (std::size_t pt = 0; pt < points; ++pt) {
      std::size_t rem = pt;
      std::array<double, 4> p{};
      for (std::size_t ax = dims; ax-- > 0;) {
        const std::size_t idx = rem % extents[ax];
        rem /= extents[ax];
        p[dims - 1 - ax] = static_cast<double>(mesh_coord<T>(idx, extents[ax]));
      }
      p[dims] = 1.0;
      std::array<double, 4> q{};
      for (std::size_t r = 0; r < m; ++r)
        for (std::size_t j = 0; j < m; ++j) q[r] += static_cast<double>(th[r * m + j]) * p[j];
      const T* gg = grad_grid + (b * points + pt) * dims;
      const double inv_w = 1.0 / q[dims];
      double last_row = 0.0;
      for (std::size_t k = 0; k < dims; ++k) {
        const double g = static_cast<double>(gg[k]);
        for (std::size_t j = 0; j < m; ++j) acc[k * m + j] += g * p[j] * inv_w;
        last_row -= g * q[k] * inv_w * inv_w;
      }
      for (std::size_t j = 0; j < m; ++j) acc[dims * m + j] += last_row * p[j];
    }
    for (std::size_t e = 0; e < m * m; ++e) grad_theta[b * m * m + e] += static_cast<T>(acc[e]);
  }
}

template <typename T>
void grid_sample2d(const T* x, const ImageExtents& in, const T* grid, std::size_t out_h,
                   std::size_t out_w, Padding padding, T* out) {
  const std::size_t out_plane = out_h * out_w;
  const auto rows = static_cast<std::ptrdiff_t>(in.n * out_h);

#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t r = 0; r < rows; ++r) {
    const std::size_t b = static_cast<std::size_t>(r) / out_h;
    const std::size_t i = static_cast<std::size_t>(r) % out_h;
    const T* xb = x + b * in.c * in.plane();
    T* ob = out + b * in.c * out_plane;
    for (std::size_t j = 0; j < out_w; ++j) {
      const std::size_t pt = i * out_w + j;
      const T* g = grid + (b * out_plane + pt) * 2;
      Corners2<T> c;
      if (!corners2(g[0], g[1], in.h, in.w, padding, c)) {
        for (std::size_t ch = 0; ch < in.c; ++ch) ob[ch * out_plane + pt] = T(0);
        continue;
      }
      for (std::size_t ch = 0; ch < in.c; ++ch) {
        const T* xp = xb + ch * in.plane();
        T acc = T(0);
        for (int k = 0; k < 4; ++k)
          if (c.valid[k]) acc += c.w[k] * xp[c.off[k]];
        ob[ch * out_plane + pt] = acc;
      }
    }
  }
}

template <typename T>
void grid_sample2d_backward(const T* x, const ImageExtents& in, const T* grid,
                            std::size_t out_h, std::size_t out_w, Padding padding,
                            const T* grad_out, T* grad_x, T* grad_grid) {
  const std::size_t out_plane = out_h * out_w;

  if (grad_x) {
    // One (sample, channel) plane per iteration: scatter targets are disjoint.
    const auto planes = static_cast<std::ptrdiff_t>(in.n * in.c);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t pc = 0; pc < planes; ++pc) {
      const std::size_t b = static_cast<std::size_t>(pc) / in.c;
      T* gx = grad_x + static_cast<std::size_t>(pc) * in.plane();
      const T* go = grad_out + static_cast<std::size_t>(pc) * out_plane;
      for (std::size_t pt = 0; pt < out_plane; ++pt) {
        const T* g = grid + (b * out_plane + pt) * 2;
        Corners2<T> c;
        if (!corners2(g[0], g[1], in.h, in.w, padding, c)) continue;
        for (int k = 0; k < 4; ++k)
          if (c.valid[k]) gx[c.off[k]] += c.w[k] * go[pt];
      }
    }
  }

  if (grad_grid) {
    const auto total = static_cast<std::ptrdiff_t>(in.n * out_plane);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t flat = 0; flat < total; ++flat) {
      const std::size_t b = static_cast<std::size_t>(flat) / out_plane;
      const std::size_t pt = static_cast<std::size_t>(flat) % out_plane;
      const T* g = grid + static_cast<std::size_t>(flat) * 2;
      T* gg = grad_grid + static_cast<std::size_t>(flat) * 2;
      Corners2<T> c;
      if (!corners2(g[0], g[1], in.h, in.w, padding, c)) continue;
      T dix = T(0), diy = T(0);
      for (std::size_t ch = 0; ch < in.c; ++ch) {
        const T* xp = x + (b * in.c + ch) * in.plane();
        std::array<T, 4> v{};
        for (int k = 0; k < 4; ++k) v[k] = c.valid[k] ? xp[c.off[k]] : T(0);
        const T go = grad_out[(b * in.c + ch) * out_plane + pt];
        dix += go * (c.ty.w0 * (v[1] - v[0]) + c.ty.w1 * (v[3] - v[2]));
        diy += go * (c.tx.w0 * (v[2] - v[0]) + c.tx.w1 * (v[3] - v[1]));
      }
      gg[0] += dix * c.tx.dcoord;
      gg[1] += diy * c.ty.dcoord;
    }
  }
}

template <typename T>
void grid_sample3d(const T* x, const VolumeExtents& in, const T* grid, std::size_t out_d,
                   std::size_t out_h, std::size_t out_w, Padding padding, T* out) {
  const std::size_t out_vol = out_d * out_h * out_w;
  const auto total = static_cast<std::ptrdiff_t>(in.n * out_vol);

#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t flat = 0; flat < total; ++flat) {
    const std::size_t b = static_cast<std::size_t>(flat) / out_vol;
    const std::size_t pt = static_cast<std::size_t>(flat) % out_vol;
    const T* g = grid + static_cast<std::size_t>(flat) * 3;
    T* ob = out + b * in.c * out_vol;
    Corners3<T> c;
    if (!corners3(g[0], g[1], g[2], in.d, in.h, in.w, padding, c)) {
      for (std::size_t ch = 0; ch < in.c; ++ch) ob[ch * out_vol + pt] = T(0);
      continue;
    }
    for (std::size_t ch = 0; ch < in.c; ++ch) {
      const T* xp = x + (b * in.c + ch) * in.volume();
      T acc = T(0);
      for (int k = 0; k < 8; ++k)
        if (c.valid[k]) acc += c.w[k] * xp[c.off[k]];
      ob[ch * out_vol + pt] = acc;
    }
  }
}

template <typename T>
void grid_sample3d_backward(const T* x, const VolumeExtents& in, const T* grid,
                            std::size_t out_d, std::size_t out_h, std::size_t out_w,
                            Padding padding, const T* grad_out, T* grad_x, T* grad_grid) {
  const std::size_t out_vol = out_d * out_h * out_w;

  if (grad_x) {
    const auto planes = static_cast<std::ptrdiff_t>(in.n * in.c);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t pc = 0; pc < planes; ++pc) {
      const std::size_t b = static_cast<std::size_t>(pc) / in.c;
      T* gx = grad_x + static_cast<std::size_t>(pc) * in.volume();
      const T* go = grad_out + static_cast<std::size_t>(pc) * out_vol;
      for (std::size_t pt = 0; pt < out_vol; ++pt) {
        const T* g = grid + (b * out_vol + pt) * 3;
        Corners3<T> c;
        if (!corners3(g[0], g[1], g[2], in.d, in.h, in.w, padding, c)) continue;
        for (int k = 0; k < 8; ++k)
          if (c.valid[k]) gx[c.off[k]] += c.w[k] * go[pt];
      }
    }
  }

  if (grad_grid) {
    const auto total = static_cast<std::ptrdiff_t>(in.n * out_vol);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t flat = 0; flat < total; ++flat) {
      const std::size_t b = static_cast<std::size_t>(flat) / out_vol;
      const std::size_t pt = static_cast<std::size_t>(flat) % out_vol;
      const T* g = grid + static_cast<std::size_t>(flat) * 3;
      T* gg = grad_grid + static_cast<std::size_t>(flat) * 3;
      Corners3<T> c;
      if (!corners3(g[0], g[1], g[2], in.d, in.h, in.w, padding, c)) continue;
      const T wx[2] = {c.tx.w0, c.tx.w1}, wy[2] = {c.ty.w0, c.ty.w1}, wz[2] = {c.tz.w0, c.tz.w1};
      T dix = T(0), diy = T(0), diz = T(0);
      for (std::size_t ch = 0; ch < in.c; ++ch) {
        const T* xp = x + (b * in.c + ch) * in.volume();
        std::array<T, 8> v{};
        for (int k = 0; k < 8; ++k) v[k] = c.valid[k] ? xp[c.off[k]] : T(0);
        const T go = grad_out[(b * in.c + ch) * out_vol + pt];
        T sx = T(0), sy = T(0), sz = T(0);
        for (int a = 0; a < 2; ++a) {
          for (int bb = 0; bb < 2; ++bb) {
            // d/dx: corners differing in dx, weighted by (dz=a, dy=bb).
            sx += wz[a] * wy[bb] * (v[(a << 2) | (bb << 1) | 1] - v[(a << 2) | (bb << 1)]);
            // d/dy: (dz=a, dx=bb).
            sy += wz[a] * wx[bb] * (v[(a << 2) | 2 | bb] - v[(a << 2) | bb]);
            // d/dz: (dy=a, dx=bb).
            sz += wy[a] * wx[bb] * (v[4 | (a << 1) | bb] - v[(a << 1) | bb]);
          }
        }
        dix += go * sx;
        diy += go * sy;
        diz += go * sz;
      }
      gg[0] += dix * c.tx.dcoord;
      gg[1] += diy * c.ty.dcoord;
      gg[2] += diz * c.tz.dcoord;
    }
  }
}

#define DDAUG_INSTANTIATE(T)                                                                    \
  template void affine_grid<T>(const T*, std::size_t, const Shape&, T*);                        \
  template void affine_grid_backward<T>(const T*, std::size_t, const Shape&, const T*, T*);     \
  template void grid_sample2d<T>(const T*, const ImageExtents&, const T*, std::size_t,          \
                                 std::size_t, Padding, T*);                                     \
  template void grid_sample2d_backward<T>(const T*, const ImageExtents&, const T*, std::size_t, \
                                          std::size_t, Padding, const T*, T*, T*);              \
  template void grid_sample3d<T>(const T*, const VolumeExtents&, const T*, std::size_t,         \
                                 std::size_t, std::size_t, Padding, T*);                        \
  template void grid_sample3d_backward<T>(const T*, const VolumeExtents&, const T*,             \
                                          std::size_t, std::size_t, std::size_t, Padding,       \
                                          const T*, T*, T*);

DDAUG_INSTANTIATE(float)
DDAUG_INSTANTIATE(double)
#undef DDAUG_INSTANTIATE

}  // namespace ddaug::kernels
