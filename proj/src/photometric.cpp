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

#include "ddaug/photometric.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>

namespace ddaug {

namespace {

using Index = std::ptrdiff_t;

struct Dims {
  std::size_t n, c, h, w, plane;
  std::size_t per_sample() const { return c * plane; }
  std::size_t total() const { return n * c * plane; }
};

template <typename T>
Dims image_dims(const Tensor<T>& x, const std::string& op) {
  if (!x.defined() || x.rank() != 4)
    throw ShapeError(op + ": expected an (N, C, H, W) image batch, got " +
                     (x.defined() ? shape_str(x.shape()) : std::string("undefined")));
  return {x.dim(0), x.dim(1), x.dim(2), x.dim(3), x.dim(2) * x.dim(3)};
}

void require_rgb(const Dims& d, const std::string& op) {
  if (d.c != 3) throw ShapeError(op + ": needs 3 channels, got " + std::to_string(d.c));
}

template <typename T>
void check_per_sample(const Tensor<T>& p, std::size_t n, const std::string& op) {
  if (!p.defined() || (p.numel() != 1 && p.numel() != n) || p.rank() > 1)
    throw ShapeError(op + ": parameter must have shape {1} or {" + std::to_string(n) + "}");
}

template <typename T>
void check_nonneg(const Tensor<T>& p, const std::string& op) {
  for (T v : p.data())
    if (!(std::isfinite(v) && v >= T(0)))
      throw ArgumentError(op + ": factor must be finite and >= 0, got " + std::to_string(v));
}

inline std::size_t pick(std::size_t numel, std::size_t i) { return numel == 1 ? 0 : i; }

template <typename T>
bool in_unit(T y) {
  return y >= T(0) && y <= T(1);
}

template <typename T>
T clamp01(T y) {
  return std::min(std::max(y, T(0)), T(1));
}

// Evaluates f(s) for every sample in parallel and folds the results into a
// parameter gradient in sample order.
template <typename T, typename F>
void accumulate_param(std::vector<T>& grad, std::size_t n, F&& f) {
  if (grad.empty()) return;
  std::vector<double> partial(n);
#pragma omp parallel for schedule(static)
  for (Index s = 0; s < static_cast<Index>(n); ++s) partial[s] = f(static_cast<std::size_t>(s));
  for (std::size_t s = 0; s < n; ++s) grad[pick(grad.size(), s)] += static_cast<T>(partial[s]);
}

template <typename T>
void check_channel_param(const Tensor<T>& p, std::size_t c, const std::string& op) {
  if (!p.defined() || p.rank() > 1 || (p.numel() != 1 && p.numel() != c))
    throw ShapeError(op + ": mean/std must have shape {1} or {" + std::to_string(c) + "}");
}

template <typename T>
void check_std(const Tensor<T>& s, const std::string& op) {
  for (T v : s.data())
    if (!(v > T(0))) throw ArgumentError(op + ": std must be > 0, got " + std::to_string(v));
}

// Luma mean of each sample, or the channel mean for single-channel input.
template <typename T>
std::vector<double> luma_means(const T* x, const Dims& d) {
  std::vector<double> m(d.n);
#pragma omp parallel for schedule(static)
  for (Index s = 0; s < static_cast<Index>(d.n); ++s) {
    const T* base = x + s * d.per_sample();
    double acc = 0.0;
    if (d.c == 1) {
      for (std::size_t p = 0; p < d.plane; ++p) acc += base[p];
    } else {
      for (std::size_t c = 0; c < 3; ++c) {
        double ch = 0.0;
        for (std::size_t p = 0; p < d.plane; ++p) ch += base[c * d.plane + p];
        acc += kLumaWeights[c] * ch;
      }
    }
    m[s] = acc / static_cast<double>(d.plane);
  }
  return m;
}

using Mat3 = std::array<double, 9>;

Mat3 mat3_mul(const Mat3& a, const Mat3& b) {
  Mat3 r{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) r[i * 3 + j] += a[i * 3 + k] * b[k * 3 + j];
  return r;
}

const Mat3 kRgbToYiq = {0.299, 0.587, 0.114, 0.595716, -0.274453, -0.321263,
                        0.211456, -0.522591, 0.311135};

Mat3 invert3(const Mat3& a) {
  const double c00 = a[4] * a[8] - a[5] * a[7];
  const double c01 = a[5] * a[6] - a[3] * a[8];
  const double c02 = a[3] * a[7] - a[4] * a[6];
  const double det = a[0] * c00 + a[1] * c01 + a[2] * c02;
  return {c00 / det,
          (a[2] * a[7] - a[1] * a[8]) / det,
          (a[1] * a[5] - a[2] * a[4]) / det,
          c01 / det,
          (a[0] * a[8] - a[2] * a[6]) / det,
          (a[2] * a[3] - a[0] * a[5]) / det,
          c02 / det,
          (a[1] * a[6] - a[0] * a[7]) / det,
          (a[0] * a[4] - a[1] * a[3]) / det};
}

const Mat3& yiq_to_rgb() {
  static const Mat3 inv = invert3(kRgbToYiq);
  return inv;
}

Mat3 hue_matrix(double theta, bool derivative) {
  const double c = std::cos(theta), s = std::sin(theta);
  const Mat3 r = derivative ? Mat3{0, 0, 0, 0, -s, -c, 0, c, -s} : Mat3{1, 0, 0, 0, c, -s, 0, s, c};
  return mat3_mul(yiq_to_rgb(), mat3_mul(r, kRgbToYiq));
}

// Smoothing operator used by sharpness: 3x3 kernel on interior pixels,
// identity on the one-pixel border.
template <typename T>
double smooth_at(const T* plane, std::size_t h, std::size_t w, std::size_t i, std::size_t j) {
  if (i == 0 || j == 0 || i + 1 >= h || j + 1 >= w) return plane[i * w + j];
  double acc = 4.0 * plane[i * w + j];
  for (std::size_t di = 0; di < 3; ++di)
    for (std::size_t dj = 0; dj < 3; ++dj) acc += plane[(i + di - 1) * w + (j + dj - 1)];
  return acc / 13.0;
}

template <typename T>
void smooth_transpose(const double* g, std::size_t h, std::size_t w, T* out) {
  for (std::size_t i = 0; i < h; ++i)
    for (std::size_t j = 0; j < w; ++j) {
      const double gv = g[i * w + j];
      if (i == 0 || j == 0 || i + 1 >= h || j + 1 >= w) {
        out[i * w + j] += static_cast<T>(gv);
        continue;
      }
      const double k = gv / 13.0;
      for (std::size_t di = 0; di < 3; ++di)
        for (std::size_t dj = 0; dj < 3; ++dj)
          out[(i + di - 1) * w + (j + dj - 1)] += static_cast<T>(k);
      out[i * w + j] += static_cast<T>(4.0 * k);
    }
}

void check_perm(const std::vector<std::size_t>& perm, std::size_t n, const std::string& op) {
  if (perm.size() != n)
    throw ArgumentError(op + ": permutation has " + std::to_string(perm.size()) +
                        " entries for batch " + std::to_string(n));
  std::vector<bool> seen(n, false);
  for (std::size_t v : perm) {
    if (v >= n || seen[v]) throw ArgumentError(op + ": not a permutation of 0.." + std::to_string(n - 1));
    seen[v] = true;
  }
}

void check_boxes(const std::vector<Box>& boxes, const Dims& d, const std::string& op) {
  if (boxes.size() != d.n)
    throw ArgumentError(op + ": expected " + std::to_string(d.n) + " boxes, got " +
                        std::to_string(boxes.size()));
  for (const Box& b : boxes)
    if (b.x0 + b.w > d.w || b.y0 + b.h > d.h)
      throw ArgumentError(op + ": box (" + std::to_string(b.x0) + ", " + std::to_string(b.y0) +
                          ", " + std::to_string(b.w) + ", " + std::to_string(b.h) +
                          ") exceeds image " + std::to_string(d.h) + "x" + std::to_string(d.w));
}

bool in_box(const Box& b, std::size_t i, std::size_t j) {
  return i >= b.y0 && i < b.y0 + b.h && j >= b.x0 && j < b.x0 + b.w;
}

template <typename T>
Tensor<T> affine_channels(const Tensor<T>& x, const Tensor<T>& mean, const Tensor<T>& std,
                          bool forward, const std::string& op) {
  const Dims d = image_dims(x, op);
  check_channel_param(mean, d.c, op);
  check_channel_param(std, d.c, op);
  check_std(std, op);
  const std::size_t mn = mean.numel(), sn = std.numel();
  std::vector<T> out(d.total());
  const T* xv = x.data().data();
  const T* mv = mean.data().data();
  const T* sv = std.data().data();
#pragma omp parallel for schedule(static)
  for (Index q = 0; q < static_cast<Index>(d.n * d.c); ++q) {
    const std::size_t c = q % d.c;
    const T m = mv[pick(mn, c)], s = sv[pick(sn, c)];
    const T* src = xv + q * d.plane;
    T* dst = out.data() + q * d.plane;
    if (forward)
      for (std::size_t p = 0; p < d.plane; ++p) dst[p] = (src[p] - m) / s;
    else
      for (std::size_t p = 0; p < d.plane; ++p) dst[p] = src[p] * s + m;
  }
  auto xi = x.impl(), mi = mean.impl(), si = std.impl();
  return detail::make_result<T>(
      x.shape(), std::move(out), {x, mean, std}, forward ? "normalize" : "denormalize",
      [xi, mi, si, d, forward](std::span<const T> g, std::vector<std::vector<T>>& gin) {
        const T* xv = xi->data.data();
        const std::size_t mn = mi->data.size(), sn = si->data.size();
        if (!gin[0].empty()) {
#pragma omp parallel for schedule(static)
          for (Index q = 0; q < static_cast<Index>(d.n * d.c); ++q) {
            const T s = si->data[pick(sn, q % d.c)];
            const T f = forward ? T(1) / s : s;
            for (std::size_t p = 0; p < d.plane; ++p) gin[0][q * d.plane + p] += g[q * d.plane + p] * f;
          }
        }
        if (gin[1].empty() && gin[2].empty()) return;
        std::vector<double> gsum(d.n * d.c), gx(d.n * d.c);
#pragma omp parallel for schedule(static)
        for (Index q = 0; q < static_cast<Index>(d.n * d.c); ++q) {
          const double m = mi->data[pick(mn, q % d.c)];
          double a = 0.0, b = 0.0;
          for (std::size_t p = 0; p < d.plane; ++p) {
            const double gv = g[q * d.plane + p];
            a += gv;
            b += gv * (forward ? xv[q * d.plane + p] - m : xv[q * d.plane + p]);
          }
          gsum[q] = a;
          gx[q] = b;
        }
        for (std::size_t q = 0; q < d.n * d.c; ++q) {
          const std::size_t c = q % d.c;
          const double s = si->data[pick(sn, c)];
          if (!gin[1].empty()) gin[1][pick(mn, c)] += static_cast<T>(forward ? -gsum[q] / s : gsum[q]);
          if (!gin[2].empty()) gin[2][pick(sn, c)] += static_cast<T>(forward ? -gx[q] / (s * s) : gx[q]);
        }
      });
}

}  // namespace

template <typename T>
Tensor<T> normalize(const Tensor<T>& x, const Tensor<T>& mean, const Tensor<T>& std) {
  return affine_channels(x, mean, std, true, "normalize");
}

template <typename T>
Tensor<T> denormalize(const Tensor<T>& x, const Tensor<T>& mean, const Tensor<T>& std) {
  return affine_channels(x, mean, std, false, "denormalize");
}

template <typename T>
Tensor<T> adjust_brightness(const Tensor<T>& x, const Tensor<T>& factor) {
  const Dims d = image_dims(x, "adjust_brightness");
  check_per_sample(factor, d.n, "adjust_brightness");
  check_nonneg(factor, "adjust_brightness");
  const std::size_t fn = factor.numel(), per = d.per_sample();
  std::vector<T> out(d.total());
  const T* xv = x.data().data();
  const T* fv = factor.data().data();
#pragma omp parallel for schedule(static)
  for (Index i = 0; i < static_cast<Index>(d.total()); ++i)
    out[i] = clamp01(xv[i] * fv[pick(fn, i / per)]);
  auto xi = x.impl(), fi = factor.impl();
  return detail::make_result<T>(
      x.shape(), std::move(out), {x, factor}, "adjust_brightness",
      [xi, fi, d, per](std::span<const T> g, std::vector<std::vector<T>>& gin) {
        const T* xv = xi->data.data();
        const T* fv = fi->data.data();
        const std::size_t fn = fi->data.size();
        if (!gin[0].empty()) {
#pragma omp parallel for schedule(static)
          for (Index i = 0; i < static_cast<Index>(d.total()); ++i) {
            const T f = fv[pick(fn, i / per)];
            if (in_unit(xv[i] * f)) gin[0][i] += g[i] * f;
          }
        }
        accumulate_param(gin[1], d.n, [&](std::size_t s) {
          const T f = fv[pick(fn, s)];
          double acc = 0.0;
          for (std::size_t k = s * per; k < (s + 1) * per; ++k)
            if (in_unit(xv[k] * f)) acc += static_cast<double>(g[k]) * xv[k];
          return acc;
        });
      });
}

template <typename T>
Tensor<T> adjust_contrast(const Tensor<T>& x, const Tensor<T>& factor) {
  const Dims d = image_dims(x, "adjust_contrast");
  if (d.c != 1 && d.c != 3)
    throw ShapeError("adjust_contrast: needs 1 or 3 channels, got " + std::to_string(d.c));
  check_per_sample(factor, d.n, "adjust_contrast");
  check_nonneg(factor, "adjust_contrast");
  const std::size_t fn = factor.numel(), per = d.per_sample();
  const T* xv = x.data().data();
  const T* fv = factor.data().data();
  const std::vector<double> m = luma_means(xv, d);
  std::vector<T> out(d.total());
#pragma omp parallel for schedule(static)
  for (Index i = 0; i < static_cast<Index>(d.total()); ++i) {
    const std::size_t s = i / per;
    const T mt = static_cast<T>(m[s]);
    out[i] = clamp01((xv[i] - mt) * fv[pick(fn, s)] + mt);
  }
  auto xi = x.impl(), fi = factor.impl();
  return detail::make_result<T>(
      x.shape(), std::move(out), {x, factor}, "adjust_contrast",
      [xi, fi, d, per, m](std::span<const T> g, std::vector<std::vector<T>>& gin) {
        const T* xv = xi->data.data();
        const T* fv = fi->data.data();
        const std::size_t fn = fi->data.size();
        std::vector<double> gsum(d.n), gf(d.n);
#pragma omp parallel for schedule(static)
        for (Index s = 0; s < static_cast<Index>(d.n); ++s) {
          const T f = fv[pick(fn, s)];
          const T mt = static_cast<T>(m[s]);
          double a = 0.0, b = 0.0;
          for (std::size_t k = s * per; k < (s + 1) * per; ++k) {
            if (!in_unit((xv[k] - mt) * f + mt)) continue;
            a += g[k];
            b += static_cast<double>(g[k]) * (xv[k] - m[s]);
          }
          gsum[s] = a;
          gf[s] = b;
        }
        if (!gin[0].empty()) {
#pragma omp parallel for schedule(static)
          for (Index i = 0; i < static_cast<Index>(d.total()); ++i) {
            const std::size_t s = i / per, c = (i % per) / d.plane;
            const T f = fv[pick(fn, s)];
            const T mt = static_cast<T>(m[s]);
            const double w = d.c == 1 ? 1.0 : kLumaWeights[c];
            double v = w * (1.0 - f) * gsum[s] / static_cast<double>(d.plane);
            if (in_unit((xv[i] - mt) * f + mt)) v += static_cast<double>(g[i]) * f;
            gin[0][i] += static_cast<T>(v);
          }
        }
        if (!gin[1].empty())
          for (std::size_t s = 0; s < d.n; ++s) gin[1][pick(fn, s)] += static_cast<T>(gf[s]);
      });
}

template <typename T>
Tensor<T> adjust_saturation(const Tensor<T>& x, const Tensor<T>& factor) {
  const Dims d = image_dims(x, "adjust_saturation");
  require_rgb(d, "adjust_saturation");
  check_per_sample(factor, d.n, "adjust_saturation");
  check_nonneg(factor, "adjust_saturation");
  const std::size_t fn = factor.numel(), per = d.per_sample();
  const T* xv = x.data().data();
  const T* fv = factor.data().data();
  std::vector<T> out(d.total());
#pragma omp parallel for schedule(static)
  for (Index q = 0; q < static_cast<Index>(d.n * d.plane); ++q) {
    const std::size_t s = q / d.plane, p = q % d.plane;
    const T* px = xv + s * per + p;
    const T f = fv[pick(fn, s)];
    const T l = static_cast<T>(kLumaWeights[0] * px[0] + kLumaWeights[1] * px[d.plane] +
                               kLumaWeights[2] * px[2 * d.plane]);
    for (std::size_t c = 0; c < 3; ++c)
      out[s * per + c * d.plane + p] = clamp01(f * px[c * d.plane] + (T(1) - f) * l);
  }
  auto xi = x.impl(), fi = factor.impl();
  return detail::make_result<T>(
      x.shape(), std::move(out), {x, factor}, "adjust_saturation",
      [xi, fi, d, per](std::span<const T> g, std::vector<std::vector<T>>& gin) {
        const T* xv = xi->data.data();
        const T* fv = fi->data.data();
        const std::size_t fn = fi->data.size();
        std::vector<double> gf(d.n, 0.0);
#pragma omp parallel for schedule(static)
        for (Index s = 0; s < static_cast<Index>(d.n); ++s) {
          const T f = fv[pick(fn, s)];
          double acc = 0.0;
          for (std::size_t p = 0; p < d.plane; ++p) {
            const T* px = xv + s * per + p;
            const T l = static_cast<T>(kLumaWeights[0] * px[0] + kLumaWeights[1] * px[d.plane] +
                                       kLumaWeights[2] * px[2 * d.plane]);
            double gy[3], gsum = 0.0;
            for (std::size_t c = 0; c < 3; ++c) {
              const std::size_t k = s * per + c * d.plane + p;
              gy[c] = in_unit(f * px[c * d.plane] + (T(1) - f) * l) ? static_cast<double>(g[k]) : 0.0;
              gsum += gy[c];
              acc += gy[c] * (px[c * d.plane] - l);
            }
            if (!gin[0].empty())
              for (std::size_t c = 0; c < 3; ++c)
                gin[0][s * per + c * d.plane + p] +=
                    static_cast<T>(f * gy[c] + kLumaWeights[c] * (1.0 - f) * gsum);
          }
          gf[s] = acc;
        }
        if (!gin[1].empty())
          for (std::size_t s = 0; s < d.n; ++s) gin[1][pick(fn, s)] += static_cast<T>(gf[s]);
      });
}

template <typename T>
Tensor<T> adjust_hue(const Tensor<T>& x, const Tensor<T>& shift) {
  const Dims d = image_dims(x, "adjust_hue");
  require_rgb(d, "adjust_hue");
  check_per_sample(shift, d.n, "adjust_hue");
  for (T v : shift.data())
    if (!std::isfinite(v)) throw ArgumentError("adjust_hue: shift must be finite");
  const std::size_t hn = shift.numel(), per = d.per_sample();
  std::vector<Mat3> mats(d.n);
  for (std::size_t s = 0; s < d.n; ++s) mats[s] = hue_matrix(shift.data()[pick(hn, s)], false);
  const T* xv = x.data().data();
  std::vector<T> out(d.total());
#pragma omp parallel for schedule(static)
  for (Index q = 0; q < static_cast<Index>(d.n * d.plane); ++q) {
    const std::size_t s = q / d.plane, p = q % d.plane;
    const Mat3& M = mats[s];
    const double r = xv[s * per + p], gg = xv[s * per + d.plane + p], b = xv[s * per + 2 * d.plane + p];
    for (std::size_t c = 0; c < 3; ++c)
      out[s * per + c * d.plane + p] =
          clamp01(static_cast<T>(M[c * 3] * r + M[c * 3 + 1] * gg + M[c * 3 + 2] * b));
  }
  auto xi = x.impl(), hi = shift.impl();
  return detail::make_result<T>(
      x.shape(), std::move(out), {x, shift}, "adjust_hue",
      [xi, hi, d, per, mats](std::span<const T> g, std::vector<std::vector<T>>& gin) {
        const T* xv = xi->data.data();
        const std::size_t hn = hi->data.size();
        std::vector<double> gh(d.n, 0.0);
#pragma omp parallel for schedule(static)
        for (Index s = 0; s < static_cast<Index>(d.n); ++s) {
          const Mat3& M = mats[s];
          const Mat3 dM = hue_matrix(hi->data[pick(hn, s)], true);
          double acc = 0.0;
          for (std::size_t p = 0; p < d.plane; ++p) {
            const double v[3] = {static_cast<double>(xv[s * per + p]),
                                 static_cast<double>(xv[s * per + d.plane + p]),
                                 static_cast<double>(xv[s * per + 2 * d.plane + p])};
            double gy[3];
            for (std::size_t c = 0; c < 3; ++c) {
              const T y = static_cast<T>(M[c * 3] * v[0] + M[c * 3 + 1] * v[1] + M[c * 3 + 2] * v[2]);
              gy[c] = in_unit(y) ? static_cast<double>(g[s * per + c * d.plane + p]) : 0.0;
              acc += gy[c] * (dM[c * 3] * v[0] + dM[c * 3 + 1] * v[1] + dM[c * 3 + 2] * v[2]);
            }
            if (!gin[0].empty())
              for (std::size_t c = 0; c < 3; ++c)
                gin[0][s * per + c * d.plane + p] +=
                    static_cast<T>(M[c] * gy[0] + M[3 + c] * gy[1] + M[6 + c] * gy[2]);
          }
          gh[s] = acc;
        }
        if (!gin[1].empty())
          for (std::size_t s = 0; s < d.n; ++s) gin[1][pick(hn, s)] += static_cast<T>(gh[s]);
      });
}

template <typename T>
Tensor<T> grayscale(const Tensor<T>& x) {
  const Dims d = image_dims(x, "grayscale");
  require_rgb(d, "grayscale");
  const std::size_t per = d.per_sample();
  const T* xv = x.data().data();
  std::vector<T> out(d.total());
#pragma omp parallel for schedule(static)
  for (Index q = 0; q < static_cast<Index>(d.n * d.plane); ++q) {
    const std::size_t s = q / d.plane, p = q % d.plane;
    const T* px = xv + s * per + p;
    const double l = kLumaWeights[0] * px[0] + kLumaWeights[1] * px[d.plane] +
                     kLumaWeights[2] * px[2 * d.plane];
    const T lt = static_cast<T>(std::min(std::max(l, 0.0), 1.0));
    for (std::size_t c = 0; c < 3; ++c) out[s * per + c * d.plane + p] = lt;
  }
  return detail::make_result<T>(
      x.shape(), std::move(out), {x}, "grayscale",
      [d, per](std::span<const T> g, std::vector<std::vector<T>>& gin) {
#pragma omp parallel for schedule(static)
        for (Index q = 0; q < static_cast<Index>(d.n * d.plane); ++q) {
          const std::size_t s = q / d.plane, p = q % d.plane;
          const std::size_t k = s * per + p;
          const double gsum = static_cast<double>(g[k]) + g[k + d.plane] + g[k + 2 * d.plane];
          for (std::size_t c = 0; c < 3; ++c)
            gin[0][k + c * d.plane] += static_cast<T>(kLumaWeights[c] * gsum);
        }
      });
}

template <typename T>
Tensor<T> solarize(const Tensor<T>& x, const std::vector<double>& thresholds) {
  const Dims d = image_dims(x, "solarize");
  if (thresholds.size() != 1 && thresholds.size() != d.n)
    throw ShapeError("solarize: expected 1 or " + std::to_string(d.n) + " thresholds");
  for (double t : thresholds)
    if (!(t >= 0.0 && t <= 1.0))
      throw ArgumentError("solarize: threshold must lie in [0, 1], got " + std::to_string(t));
  const std::size_t per = d.per_sample(), tn = thresholds.size();
  const T* xv = x.data().data();
  std::vector<T> out(d.total());
#pragma omp parallel for schedule(static)
  for (Index i = 0; i < static_cast<Index>(d.total()); ++i) {
    const T t = static_cast<T>(thresholds[pick(tn, i / per)]);
    out[i] = xv[i] < t ? xv[i] : T(1) - xv[i];
  }
  auto xi = x.impl();
  return detail::make_result<T>(
      x.shape(), std::move(out), {x}, "solarize",
      [xi, thresholds, per, tn, d](std::span<const T> g, std::vector<std::vector<T>>& gin) {
#pragma omp parallel for schedule(static)
        for (Index i = 0; i < static_cast<Index>(d.total()); ++i) {
          const T t = static_cast<T>(thresholds[pick(tn, i / per)]);
          gin[0][i] += xi->data[i] < t ? g[i] : -g[i];
        }
      });
}

template <typename T>
Tensor<T> equalize(const Tensor<T>& x) {
  const Dims d = image_dims(x, "equalize");
  const T* xv = x.data().data();
  for (std::size_t i = 0; i < d.total(); ++i)
    if (!(xv[i] >= T(0) && xv[i] <= T(1)))
      throw ArgumentError("equalize: input values must lie in [0, 1]");
  std::vector<T> out(d.total());
#pragma omp parallel for schedule(static)
  for (Index q = 0; q < static_cast<Index>(d.n * d.c); ++q) {
    const T* src = xv + q * d.plane;
    T* dst = out.data() + q * d.plane;
    std::array<std::uint64_t, 256> hist{};
    std::vector<std::uint8_t> bins(d.plane);
    for (std::size_t p = 0; p < d.plane; ++p) {
      const auto b = static_cast<std::uint8_t>(
          std::min(255.0, std::floor(static_cast<double>(src[p]) * 255.0 + 0.5)));
      bins[p] = b;
      ++hist[b];
    }
    std::uint64_t last = 0, total = 0;
    for (std::size_t b = 0; b < 256; ++b) {
      if (hist[b]) last = hist[b];
      total += hist[b];
    }
    const std::uint64_t step = (total - last) / 255;
    if (step == 0) {
      std::copy(src, src + d.plane, dst);
      continue;
    }
    std::array<T, 256> lut{};
    std::uint64_t acc = step / 2;
    for (std::size_t b = 0; b < 256; ++b) {
      lut[b] = static_cast<T>(static_cast<double>(std::min<std::uint64_t>(255, acc / step)) / 255.0);
      acc += hist[b];
    }
    for (std::size_t p = 0; p < d.plane; ++p) dst[p] = lut[bins[p]];
  }
  return detail::make_result<T>(x.shape(), std::move(out), {x}, "equalize",
                                [](std::span<const T> g, std::vector<std::vector<T>>& gin) {
                                  for (std::size_t i = 0; i < g.size(); ++i) gin[0][i] += g[i];
                                });
}

template <typename T>
Tensor<T> sharpness(const Tensor<T>& x, const Tensor<T>& factor) {
  const Dims d = image_dims(x, "sharpness");
  check_per_sample(factor, d.n, "sharpness");
  check_nonneg(factor, "sharpness");
  const std::size_t fn = factor.numel();
  const T* xv = x.data().data();
  const T* fv = factor.data().data();
  std::vector<T> out(d.total());
#pragma omp parallel for schedule(static)
  for (Index q = 0; q < static_cast<Index>(d.n * d.c); ++q) {
    const T* src = xv + q * d.plane;
    const T f = fv[pick(fn, q / d.c)];
    T* dst = out.data() + q * d.plane;
    for (std::size_t i = 0; i < d.h; ++i)
      for (std::size_t j = 0; j < d.w; ++j) {
        const T s = static_cast<T>(smooth_at(src, d.h, d.w, i, j));
        dst[i * d.w + j] = clamp01(f * src[i * d.w + j] + (T(1) - f) * s);
      }
  }
  auto xi = x.impl(), fi = factor.impl();
  return detail::make_result<T>(
      x.shape(), std::move(out), {x, factor}, "sharpness",
      [xi, fi, d](std::span<const T> g, std::vector<std::vector<T>>& gin) {
        const T* xv = xi->data.data();
        const std::size_t fn = fi->data.size();
        std::vector<double> gf(d.n * d.c, 0.0);
#pragma omp parallel for schedule(static)
        for (Index q = 0; q < static_cast<Index>(d.n * d.c); ++q) {
          const T* src = xv + q * d.plane;
          const T f = fi->data[pick(fn, q / d.c)];
          std::vector<double> gy(d.plane);
          double acc = 0.0;
          for (std::size_t i = 0; i < d.h; ++i)
            for (std::size_t j = 0; j < d.w; ++j) {
              const std::size_t k = i * d.w + j;
              const double s = smooth_at(src, d.h, d.w, i, j);
              const T y = f * src[k] + (T(1) - f) * static_cast<T>(s);
              gy[k] = in_unit(y) ? static_cast<double>(g[q * d.plane + k]) : 0.0;
              acc += gy[k] * (src[k] - s);
            }
          gf[q] = acc;
          if (gin[0].empty()) continue;
          T* gx = gin[0].data() + q * d.plane;
          for (std::size_t k = 0; k < d.plane; ++k) gx[k] += static_cast<T>(f * gy[k]);
          for (double& v : gy) v *= (1.0 - f);
          smooth_transpose(gy.data(), d.h, d.w, gx);
        }
        if (!gin[1].empty())
          for (std::size_t q = 0; q < d.n * d.c; ++q) gin[1][pick(fn, q / d.c)] += static_cast<T>(gf[q]);
      });
}

std::vector<double> motion_blur_kernel(std::size_t size, double angle_deg, double direction) {
  if (size < 3 || size % 2 == 0)
    throw ArgumentError("motion_blur: kernel size must be odd and >= 3, got " + std::to_string(size));
  if (!(direction >= -1.0 && direction <= 1.0))
    throw ArgumentError("motion_blur: direction must lie in [-1, 1]");
  if (!std::isfinite(angle_deg)) throw ArgumentError("motion_blur: angle must be finite");
  const double a = angle_deg * std::numbers::pi / 180.0;
  const double c = static_cast<double>(size - 1) / 2.0;
  const double front = (direction + 1.0) / 2.0;
  std::vector<double> k(size * size, 0.0);
  double total = 0.0;
  for (std::size_t i = 0; i < size; ++i) {
    const double t = static_cast<double>(i) - c;
    const auto col = static_cast<std::size_t>(std::lround(c + t * std::cos(a)));
    const auto row = static_cast<std::size_t>(std::lround(c - t * std::sin(a)));
    const double w = (1.0 - front) + (2.0 * front - 1.0) * static_cast<double>(i) / static_cast<double>(size - 1);
    k[row * size + col] += w;
    total += w;
  }
  for (double& v : k) v /= total;
  return k;
}

template <typename T>
Tensor<T> motion_blur(const Tensor<T>& x, std::size_t kernel_size,
                      const std::vector<double>& angles_deg,
                      const std::vector<double>& directions) {
  const Dims d = image_dims(x, "motion_blur");
  if (angles_deg.size() != d.n || directions.size() != d.n)
    throw ShapeError("motion_blur: expected " + std::to_string(d.n) + " angles and directions");
  StaticKernel<T> kernel;
  kernel.height = kernel.width = kernel_size;
  kernel.count = d.n;
  kernel.values.reserve(d.n * kernel_size * kernel_size);
  for (std::size_t s = 0; s < d.n; ++s)
    for (double v : motion_blur_kernel(kernel_size, angles_deg[s], directions[s]))
      kernel.values.push_back(static_cast<T>(v));
  return conv2d_fixed(x, kernel);
}

template <typename T>
MixResult<T> mixup(const Tensor<T>& x, const Tensor<T>& lam, const std::vector<std::size_t>& perm) {
  const Dims d = image_dims(x, "mixup");
  check_per_sample(lam, d.n, "mixup");
  for (T v : lam.data())
    if (!(v >= T(0) && v <= T(1))) throw ArgumentError("mixup: lam must lie in [0, 1]");
  check_perm(perm, d.n, "mixup");
  const std::size_t ln = lam.numel(), per = d.per_sample();
  const T* xv = x.data().data();
  const T* lv = lam.data().data();
  std::vector<T> out(d.total());
#pragma omp parallel for schedule(static)
  for (Index i = 0; i < static_cast<Index>(d.total()); ++i) {
    const std::size_t s = i / per, k = i % per;
    const T l = lv[pick(ln, s)];
    out[i] = l * xv[i] + (T(1) - l) * xv[perm[s] * per + k];
  }
  auto xi = x.impl(), li = lam.impl();
  MixResult<T> r;
  r.output = detail::make_result<T>(
      x.shape(), std::move(out), {x, lam}, "mixup",
      [xi, li, perm, d, per](std::span<const T> g, std::vector<std::vector<T>>& gin) {
        const T* xv = xi->data.data();
        const std::size_t ln = li->data.size();
        if (!gin[0].empty()) {
          for (std::size_t s = 0; s < d.n; ++s) {
            const T l = li->data[pick(ln, s)];
            T* own = gin[0].data() + s * per;
            T* partner = gin[0].data() + perm[s] * per;
            const T* gs = g.data() + s * per;
            for (std::size_t k = 0; k < per; ++k) {
              own[k] += l * gs[k];
              partner[k] += (T(1) - l) * gs[k];
            }
          }
        }
        accumulate_param(gin[1], d.n, [&](std::size_t s) {
          double acc = 0.0;
          for (std::size_t k = 0; k < per; ++k)
            acc += static_cast<double>(g[s * per + k]) * (xv[s * per + k] - xv[perm[s] * per + k]);
          return acc;
        });
      });
  r.lam.reserve(d.n);
  for (std::size_t s = 0; s < d.n; ++s) r.lam.push_back(static_cast<double>(lv[pick(ln, s)]));
  r.perm = perm;
  return r;
}

template <typename T>
MixResult<T> cutmix(const Tensor<T>& x, const std::vector<Box>& boxes,
                    const std::vector<std::size_t>& perm) {
  const Dims d = image_dims(x, "cutmix");
  check_boxes(boxes, d, "cutmix");
  check_perm(perm, d.n, "cutmix");
  const std::size_t per = d.per_sample();
  const T* xv = x.data().data();
  std::vector<T> out(xv, xv + d.total());
#pragma omp parallel for schedule(static)
  for (Index q = 0; q < static_cast<Index>(d.n * d.c); ++q) {
    const std::size_t s = q / d.c, c = q % d.c;
    const Box& b = boxes[s];
    for (std::size_t i = b.y0; i < b.y0 + b.h; ++i)
      for (std::size_t j = b.x0; j < b.x0 + b.w; ++j)
        out[q * d.plane + i * d.w + j] = xv[perm[s] * per + c * d.plane + i * d.w + j];
  }
  MixResult<T> r;
  r.output = detail::make_result<T>(
      x.shape(), std::move(out), {x}, "cutmix",
      [boxes, perm, d, per](std::span<const T> g, std::vector<std::vector<T>>& gin) {
        for (std::size_t s = 0; s < d.n; ++s)
          for (std::size_t c = 0; c < d.c; ++c)
            for (std::size_t i = 0; i < d.h; ++i)
              for (std::size_t j = 0; j < d.w; ++j) {
                const std::size_t off = c * d.plane + i * d.w + j;
                const std::size_t src = in_box(boxes[s], i, j) ? perm[s] : s;
                gin[0][src * per + off] += g[s * per + off];
              }
      });
  const double area = static_cast<double>(d.plane);
  for (const Box& b : boxes)
    r.lam.push_back(1.0 - static_cast<double>(b.w * b.h) / area);
  r.perm = perm;
  return r;
}

template <typename T>
Tensor<T> erase(const Tensor<T>& x, const std::vector<Box>& boxes, T fill) {
  const Dims d = image_dims(x, "erase");
  check_boxes(boxes, d, "erase");
  const T* xv = x.data().data();
  std::vector<T> out(xv, xv + d.total());
#pragma omp parallel for schedule(static)
  for (Index q = 0; q < static_cast<Index>(d.n * d.c); ++q) {
    const Box& b = boxes[q / d.c];
    for (std::size_t i = b.y0; i < b.y0 + b.h; ++i)
      for (std::size_t j = b.x0; j < b.x0 + b.w; ++j) out[q * d.plane + i * d.w + j] = fill;
  }
  return detail::make_result<T>(
      x.shape(), std::move(out), {x}, "erase",
      [boxes, d](std::span<const T> g, std::vector<std::vector<T>>& gin) {
#pragma omp parallel for schedule(static)
        for (Index q = 0; q < static_cast<Index>(d.n * d.c); ++q) {
          const Box& b = boxes[q / d.c];
          for (std::size_t i = 0; i < d.h; ++i)
            for (std::size_t j = 0; j < d.w; ++j)
              if (!in_box(b, i, j)) gin[0][q * d.plane + i * d.w + j] += g[q * d.plane + i * d.w + j];
        }
      });
}

#define DDAUG_INSTANTIATE(T)                                                                      \
  template Tensor<T> normalize<T>(const Tensor<T>&, const Tensor<T>&, const Tensor<T>&);          \
  template Tensor<T> denormalize<T>(const Tensor<T>&, const Tensor<T>&, const Tensor<T>&);        \
  template Tensor<T> adjust_brightness<T>(const Tensor<T>&, const Tensor<T>&);                    \
  template Tensor<T> adjust_contrast<T>(const Tensor<T>&, const Tensor<T>&);                      \
  template Tensor<T> adjust_saturation<T>(const Tensor<T>&, const Tensor<T>&);                    \
  template Tensor<T> adjust_hue<T>(const Tensor<T>&, const Tensor<T>&);                           \
  template Tensor<T> grayscale<T>(const Tensor<T>&);                                              \
  template Tensor<T> solarize<T>(const Tensor<T>&, const std::vector<double>&);                   \
  template Tensor<T> equalize<T>(const Tensor<T>&);                                               \
  template Tensor<T> sharpness<T>(const Tensor<T>&, const Tensor<T>&);                            \
  template Tensor<T> motion_blur<T>(const Tensor<T>&, std::size_t, const std::vector<double>&,    \
                                    const std::vector<double>&);                                  \
  template MixResult<T> mixup<T>(const Tensor<T>&, const Tensor<T>&,                              \
                                 const std::vector<std::size_t>&);                                \
  template MixResult<T> cutmix<T>(const Tensor<T>&, const std::vector<Box>&,                      \
                                  const std::vector<std::size_t>&);                               \
  template Tensor<T> erase<T>(const Tensor<T>&, const std::vector<Box>&, T);

DDAUG_INSTANTIATE(float)
DDAUG_INSTANTIATE(double)
#undef DDAUG_INSTANTIATE

}  // namespace ddaug
