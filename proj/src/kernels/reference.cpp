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

// Serial reference kernels. Straight loops over the output index space with no
// hoisting; used by the tests to cross-check the OpenMP kernels and by the
// kernel benchmark as the baseline.

#include <algorithm>
#include <cmath>
#include <limits>

#include "ddaug/kernels.hpp"

namespace ddaug::kernels::reference {

namespace {

template <typename T>
T pixel_coord(T g, std::size_t extent, Padding pad, T& dcoord) {
  const T last = static_cast<T>(extent - 1);
  T ix = (g + T(1)) * (T(0.5) * last);
  dcoord = T(0.5) * last;
  if (pad == Padding::border) {
    if (ix < T(0) || ix > last) dcoord = T(0);
    ix = std::min(std::max(ix, T(0)), last);
  } else {
    ix = std::min(std::max(ix, T(-2)), last + T(2));
  }
  const T r = std::nearbyint(ix);
  const T tol = T(16) * std::numeric_limits<T>::epsilon() * std::max(T(1), std::abs(ix));
  return std::abs(ix - r) <= tol ? r : ix;
}

template <typename T>
T fetch2(const T* plane, std::ptrdiff_t y, std::ptrdiff_t x, std::size_t H, std::size_t W,
         Padding pad) {
  const auto h = static_cast<std::ptrdiff_t>(H), w = static_cast<std::ptrdiff_t>(W);
  if (pad == Padding::border) {
    y = std::clamp<std::ptrdiff_t>(y, 0, h - 1);
    x = std::clamp<std::ptrdiff_t>(x, 0, w - 1);
  } else if (y < 0 || y >= h || x < 0 || x >= w) {
    return T(0);
  }
  return plane[y * w + x];
}

template <typename T>
bool in_bounds(std::ptrdiff_t i, std::size_t extent, Padding pad) {
  return pad == Padding::border || (i >= 0 && i < static_cast<std::ptrdiff_t>(extent));
}

template <typename T>
std::size_t clamp_index(std::ptrdiff_t i, std::size_t extent) {
  return static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(i, 0, static_cast<std::ptrdiff_t>(extent) - 1));
}

}  // namespace

template <typename T>
void sum_axes(const T* in, const Shape& shape, const std::vector<bool>& reduce, T* out) {
  Shape kept;
  for (std::size_t i = 0; i < shape.size(); ++i)
    if (!reduce[i]) kept.push_back(shape[i]);
  std::vector<double> acc(shape_numel(kept), 0.0);
  const std::size_t total = shape_numel(shape);
  std::vector<std::size_t> idx(shape.size(), 0);
  for (std::size_t flat = 0; flat < total; ++flat) {
    std::size_t o = 0;
    for (std::size_t ax = 0; ax < shape.size(); ++ax)
      if (!reduce[ax]) o = o * shape[ax] + idx[ax];
    acc[o] += static_cast<double>(in[flat]);
    for (std::size_t ax = shape.size(); ax-- > 0;) {
      if (++idx[ax] < shape[ax]) break;
      idx[ax] = 0;
    }
  }
  for (std::size_t o = 0; o < acc.size(); ++o) out[o] = static_cast<T>(acc[o]);
}

template <typename T>
void affine_grid(const T* theta, std::size_t n, const Shape& extents, T* grid) {
  const std::size_t dims = extents.size();
  const std::size_t m = dims + 1;
  const std::size_t D = dims == 3 ? extents[0] : 1;
  const std::size_t H = extents[dims - 2], W = extents[dims - 1];
  T* g = grid;
  for (std::size_t b = 0; b < n; ++b) {
    const T* th = theta + b * m * m;
    for (std::size_t z = 0; z < D; ++z) {
      for (std::size_t y = 0; y < H; ++y) {
        for (std::size_t x = 0; x < W; ++x) {
          T p[4] = {mesh_coord<T>(x, W), mesh_coord<T>(y, H), T(0), T(0)};
          if (dims == 3) p[2] = mesh_coord<T>(z, D);
          p[dims] = T(1);
          T q[4] = {};
          for (std::size_t r = 0; r < m; ++r) {
            T acc = T(0);
            for (std::size_t j = 0; j < m; ++j) acc += th[r * m + j] * p[j];
            q[r] = acc;
          }
          for (std::size_t k = 0; k < dims; ++k) *g++ = q[k] / q[dims];
        }
      }
    }
  }
}

template <typename T>
void grid_sample2d(const T* x, const ImageExtents& in, const T* grid, std::size_t out_h,
                   std::size_t out_w, Padding padding, T* out) {
  const std::size_t out_plane = out_h * out_w;
  for (std::size_t b = 0; b < in.n; ++b) {
    for (std::size_t ch = 0; ch < in.c; ++ch) {
      const T* plane = x + (b * in.c + ch) * in.plane();
      for (std::size_t pt = 0; pt < out_plane; ++pt) {
        const T gx = grid[(b * out_plane + pt) * 2];
        const T gy = grid[(b * out_plane + pt) * 2 + 1];
        T& o = out[(b * in.c + ch) * out_plane + pt];
        if (!std::isfinite(gx) || !std::isfinite(gy)) {
          o = T(0);
          continue;
        }
        T unused;
        const T ix = pixel_coord(gx, in.w, padding, unused);
        const T iy = pixel_coord(gy, in.h, padding, unused);
        const auto x0 = static_cast<std::ptrdiff_t>(std::floor(ix));
        const auto y0 = static_cast<std::ptrdiff_t>(std::floor(iy));
        const T fx = ix - std::floor(ix), fy = iy - std::floor(iy);
        o = (T(1) - fy) * (T(1) - fx) * fetch2(plane, y0, x0, in.h, in.w, padding) +
            (T(1) - fy) * fx * fetch2(plane, y0, x0 + 1, in.h, in.w, padding) +
            fy * (T(1) - fx) * fetch2(plane, y0 + 1, x0, in.h, in.w, padding) +
            fy * fx * fetch2(plane, y0 + 1, x0 + 1, in.h, in.w, padding);
      }
    }
  }
}

template <typename T>
void grid_sample2d_backward(const T* x, const ImageExtents& in, const T* grid,
                            std::size_t out_h, std::size_t out_w, Padding padding,
                            const T* grad_out, T* grad_x, T* grad_grid) {
  const std::size_t out_plane = out_h * out_w;
  for (std::size_t b = 0; b < in.n; ++b) {
    for (std::size_t pt = 0; pt < out_plane; ++pt) {
      const T gx = grid[(b * out_plane + pt) * 2];
      const T gy = grid[(b * out_plane + pt) * 2 + 1];
      if (!std::isfinite(gx) || !std::isfinite(gy)) continue;
      T sx, sy;
      const T ix = pixel_coord(gx, in.w, padding, sx);
      const T iy = pixel_coord(gy, in.h, padding, sy);
      const auto x0 = static_cast<std::ptrdiff_t>(std::floor(ix));
      const auto y0 = static_cast<std::ptrdiff_t>(std::floor(iy));
      const T fx = ix - std::floor(ix), fy = iy - std::floor(iy);
      T dix = T(0), diy = T(0);
      for (std::size_t ch = 0; ch < in.c; ++ch) {
        const T* plane = x + (b * in.c + ch) * in.plane();
        const T go = grad_out[(b * in.c + ch) * out_plane + pt];
        const T v00 = fetch2(plane, y0, x0, in.h, in.w, padding);
        const T v01 = fetch2(plane, y0, x0 + 1, in.h, in.w, padding);
        const T v10 = fetch2(plane, y0 + 1, x0, in.h, in.w, padding);
        const T v11 = fetch2(plane, y0 + 1, x0 + 1, in.h, in.w, padding);
        dix += go * ((T(1) - fy) * (v01 - v00) + fy * (v11 - v10));
        diy += go * ((T(1) - fx) * (v10 - v00) + fx * (v11 - v01));
        if (grad_x) {
          T* gplane = grad_x + (b * in.c + ch) * in.plane();
          const std::ptrdiff_t ys[2] = {y0, y0 + 1}, xs[2] = {x0, x0 + 1};
          const T wy[2] = {T(1) - fy, fy}, wx[2] = {T(1) - fx, fx};
          for (int a = 0; a < 2; ++a) {
            for (int c = 0; c < 2; ++c) {
              if (!in_bounds<T>(ys[a], in.h, padding) || !in_bounds<T>(xs[c], in.w, padding))
                continue;
              gplane[clamp_index<T>(ys[a], in.h) * in.w + clamp_index<T>(xs[c], in.w)] +=
                  wy[a] * wx[c] * go;
            }
          }
        }
      }
      if (grad_grid) {
        grad_grid[(b * out_plane + pt) * 2] += dix * sx;
        grad_grid[(b * out_plane + pt) * 2 + 1] += diy * sy;
      }
    }
  }
}

template <typename T>
void grid_sample3d(const T* x, const VolumeExtents& in, const T* grid, std::size_t out_d,
                   std::size_t out_h, std::size_t out_w, Padding padding, T* out) {
  const std::size_t out_vol = out_d * out_h * out_w;
  const auto D = static_cast<std::ptrdiff_t>(in.d), H = static_cast<std::ptrdiff_t>(in.h),
             W = static_cast<std::ptrdiff_t>(in.w);
  for (std::size_t b = 0; b < in.n; ++b) {
    for (std::size_t ch = 0; ch < in.c; ++ch) {
      const T* vol = x + (b * in.c + ch) * in.volume();
      for (std::size_t pt = 0; pt < out_vol; ++pt) {
        const T* g = grid + (b * out_vol + pt) * 3;
        T& o = out[(b * in.c + ch) * out_vol + pt];
        if (!std::isfinite(g[0]) || !std::isfinite(g[1]) || !std::isfinite(g[2])) {
          o = T(0);
          continue;
        }
        T unused;
        const T c[3] = {pixel_coord(g[2], in.d, padding, unused),
                        pixel_coord(g[1], in.h, padding, unused),
                        pixel_coord(g[0], in.w, padding, unused)};
        const std::ptrdiff_t base[3] = {static_cast<std::ptrdiff_t>(std::floor(c[0])),
                                        static_cast<std::ptrdiff_t>(std::floor(c[1])),
                                        static_cast<std::ptrdiff_t>(std::floor(c[2]))};
        T acc = T(0);
        for (int k = 0; k < 8; ++k) {
          const std::ptrdiff_t off[3] = {k >> 2, (k >> 1) & 1, k & 1};
          T w = T(1);
          std::ptrdiff_t idx[3];
          bool ok = true;
          const std::ptrdiff_t ext[3] = {D, H, W};
          for (int a = 0; a < 3; ++a) {
            const T f = c[a] - std::floor(c[a]);
            w *= off[a] ? f : T(1) - f;
            idx[a] = base[a] + off[a];
            if (padding == Padding::border) {
              idx[a] = std::clamp<std::ptrdiff_t>(idx[a], 0, ext[a] - 1);
            } else if (idx[a] < 0 || idx[a] >= ext[a]) {
              ok = false;
            }
          }
          if (ok) acc += w * vol[(idx[0] * H + idx[1]) * W + idx[2]];
        }
        o = acc;
      }
    }
  }
}

template <typename T>
void correlate2d(const T* x, const ImageExtents& ext, const T* kernel, bool per_sample,
                 std::size_t kh, std::size_t kw, T* out) {
  const auto ry = static_cast<std::ptrdiff_t>(kh / 2), rx = static_cast<std::ptrdiff_t>(kw / 2);
  const auto H = static_cast<std::ptrdiff_t>(ext.h), W = static_cast<std::ptrdiff_t>(ext.w);
  for (std::size_t b = 0; b < ext.n; ++b) {
    const T* k = kernel + (per_sample ? b * kh * kw : 0);
    for (std::size_t ch = 0; ch < ext.c; ++ch) {
      const T* src = x + (b * ext.c + ch) * ext.plane();
      T* dst = out + (b * ext.c + ch) * ext.plane();
      for (std::ptrdiff_t i = 0; i < H; ++i) {
        for (std::ptrdiff_t j = 0; j < W; ++j) {
          T acc = T(0);
          for (std::ptrdiff_t di = -ry; di <= ry; ++di) {
            for (std::ptrdiff_t dj = -rx; dj <= rx; ++dj) {
              const std::ptrdiff_t y = i + di, xx = j + dj;
              if (y < 0 || y >= H || xx < 0 || xx >= W) continue;
              acc += k[(di + ry) * static_cast<std::ptrdiff_t>(kw) + dj + rx] * src[y * W + xx];
            }
          }
          dst[i * W + j] = acc;
        }
      }
    }
  }
}

#define DDAUG_INSTANTIATE(T)                                                                    \
  template void sum_axes<T>(const T*, const Shape&, const std::vector<bool>&, T*);              \
  template void affine_grid<T>(const T*, std::size_t, const Shape&, T*);                        \
  template void grid_sample2d<T>(const T*, const ImageExtents&, const T*, std::size_t,          \
                                 std::size_t, Padding, T*);                                     \
  template void grid_sample2d_backward<T>(const T*, const ImageExtents&, const T*, std::size_t, \
                                          std::size_t, Padding, const T*, T*, T*);              \
  template void grid_sample3d<T>(const T*, const VolumeExtents&, const T*, std::size_t,         \
                                 std::size_t, std::size_t, Padding, T*);                        \
  template void correlate2d<T>(const T*, const ImageExtents&, const T*, bool, std::size_t,      \
                               std::size_t, T*);

DDAUG_INSTANTIATE(float)
DDAUG_INSTANTIATE(double)
#undef DDAUG_INSTANTIATE

}  // namespace ddaug::kernels::reference
