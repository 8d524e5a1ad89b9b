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

#include "ddaug/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ddaug/ops.hpp"

namespace ddaug {

namespace {

constexpr double kSingularDet = 1e-12;
constexpr double kRankPivot = 1e-10;

double det3(const double* a) {
  return a[0] * (a[4] * a[8] - a[5] * a[7]) - a[1] * (a[3] * a[8] - a[5] * a[6]) +
         a[2] * (a[3] * a[7] - a[4] * a[6]);
}

double minor_det(const double* a, std::size_t n, std::size_t skip_r, std::size_t skip_c) {
  double sub[9];
  std::size_t k = 0;
  for (std::size_t r = 0; r < n; ++r) {
    if (r == skip_r) continue;
    for (std::size_t c = 0; c < n; ++c) {
      if (c == skip_c) continue;
      sub[k++] = a[r * n + c];
    }
  }
  if (n == 3) return sub[0] * sub[3] - sub[1] * sub[2];
  return det3(sub);
}

// Inverse via the adjugate for n = 3 or 4. Returns the determinant.
double adjugate_inverse(const double* a, std::size_t n, double* inv) {
  double cof[16];
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c)
      cof[r * n + c] = (((r + c) % 2) ? -1.0 : 1.0) * minor_det(a, n, r, c);
  double det = 0.0;
  for (std::size_t c = 0; c < n; ++c) det += a[c] * cof[c];
  if (std::abs(det) >= kSingularDet)
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = 0; c < n; ++c) inv[r * n + c] = cof[c * n + r] / det;
  return det;
}

void check_dims(std::size_t dims) {
  if (dims != 2 && dims != 3)
    throw ShapeError("transforms are 2D or 3D, got dims = " + std::to_string(dims));
}

// Least squares for a row-major m x n system (m >= n) by Householder QR with
// column pivoting.
std::vector<double> least_squares(std::vector<double> A, std::vector<double> b, std::size_t m,
                                  std::size_t n) {
  std::vector<std::size_t> perm(n);
  for (std::size_t j = 0; j < n; ++j) perm[j] = j;
  std::vector<double> diag(n);
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t best = k;
    double best_norm = -1.0;
    for (std::size_t j = k; j < n; ++j) {
      double s = 0.0;
      for (std::size_t i = k; i < m; ++i) s += A[i * n + j] * A[i * n + j];
      if (s > best_norm) {
        best_norm = s;
        best = j;
      }
    }
    if (best != k) {
      for (std::size_t i = 0; i < m; ++i) std::swap(A[i * n + k], A[i * n + best]);
      std::swap(perm[k], perm[best]);
    }
    const double norm = std::sqrt(best_norm);
    if (norm < kRankPivot)
      throw DegenerateError("degenerate point configuration: pivot " + std::to_string(norm) +
                            " below 1e-10 at column " + std::to_string(k));
    const double alpha = A[k * n + k] > 0 ? -norm : norm;
    std::vector<double> v(m - k);
    for (std::size_t i = k; i < m; ++i) v[i - k] = A[i * n + k];
    v[0] -= alpha;
    double vnorm2 = 0.0;
    for (double e : v) vnorm2 += e * e;
    if (vnorm2 > 0.0) {
      for (std::size_t j = k; j < n; ++j) {
        double dot = 0.0;
        for (std::size_t i = k; i < m; ++i) dot += v[i - k] * A[i * n + j];
        const double f = 2.0 * dot / vnorm2;
        for (std::size_t i = k; i < m; ++i) A[i * n + j] -= f * v[i - k];
      }
      double dot = 0.0;
      for (std::size_t i = k; i < m; ++i) dot += v[i - k] * b[i];
      const double f = 2.0 * dot / vnorm2;
      for (std::size_t i = k; i < m; ++i) b[i] -= f * v[i - k];
    }
    diag[k] = A[k * n + k];
  }
  std::vector<double> z(n);
  for (std::size_t k = n; k-- > 0;) {
    double s = b[k];
    for (std::size_t j = k + 1; j < n; ++j) s -= A[k * n + j] * z[j];
    z[k] = s / diag[k];
  }
  std::vector<double> x(n);
  for (std::size_t j = 0; j < n; ++j) x[perm[j]] = z[j];
  return x;
}

}  // namespace

Homogeneous Homogeneous::identity(std::size_t dims) {
  check_dims(dims);
  Homogeneous h;
  h.dims = dims;
  for (std::size_t i = 0; i <= dims; ++i) h(i, i) = 1.0;
  return h;
}

Homogeneous Homogeneous::operator*(const Homogeneous& rhs) const {
  if (dims != rhs.dims) throw ShapeError("cannot multiply 2D and 3D transforms");
  Homogeneous out;
  out.dims = dims;
  const std::size_t n = size();
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) {
      double acc = 0.0;
      for (std::size_t k = 0; k < n; ++k) acc += (*this)(r, k) * rhs(k, c);
      out(r, c) = acc;
    }
  return out;
}

std::array<double, 3> Homogeneous::apply(std::span<const double> point) const {
  std::array<double, 4> p{};
  for (std::size_t k = 0; k < dims; ++k) p[k] = point[k];
  p[dims] = 1.0;
  std::array<double, 4> q{};
  for (std::size_t r = 0; r <= dims; ++r)
    for (std::size_t c = 0; c <= dims; ++c) q[r] += (*this)(r, c) * p[c];
  std::array<double, 3> out{};
  for (std::size_t k = 0; k < dims; ++k) out[k] = q[k] / q[dims];
  return out;
}

Homogeneous pixel_to_normalized(const Shape& extents) {
  const std::size_t dims = extents.size();
  Homogeneous h = Homogeneous::identity(dims);
  for (std::size_t k = 0; k < dims; ++k) {
    const std::size_t L = extents[dims - 1 - k];  // k = 0 is x (width)
    if (L > 1) {
      h(k, k) = 2.0 / static_cast<double>(L - 1);
      h(k, dims) = -1.0;
    }
  }
  return h;
}

Homogeneous normalized_to_pixel(const Shape& extents) {
  return inverse(pixel_to_normalized(extents));
}

Homogeneous inverse(const Homogeneous& h) {
  Homogeneous out;
  out.dims = h.dims;
  const double det = adjugate_inverse(h.m.data(), h.size(), out.m.data());
  if (!(std::abs(det) >= kSingularDet)) throw SingularMatrixError(0, det);
  return out;
}

template <typename T>
TransformMatrix<T>::TransformMatrix(Tensor<T> entries) : entries_(std::move(entries)) {
  const Shape& s = entries_.shape();
  if (s.size() != 3 || s[1] != s[2] || (s[1] != 3 && s[1] != 4))
    throw ShapeError("transform entries must be (N, 3, 3) or (N, 4, 4), got " + shape_str(s));
}

template <typename T>
TransformMatrix<T> TransformMatrix<T>::identity(std::size_t batch, std::size_t dims) {
  return from_host(std::vector<Homogeneous>(batch, Homogeneous::identity(dims)));
}

template <typename T>
TransformMatrix<T> TransformMatrix<T>::from_host(const std::vector<Homogeneous>& per_sample) {
  if (per_sample.empty()) throw ArgumentError("transform batch must be non-empty");
  const std::size_t dims = per_sample[0].dims;
  check_dims(dims);
  const std::size_t n = dims + 1;
  std::vector<T> values;
  values.reserve(per_sample.size() * n * n);
  for (const auto& h : per_sample) {
    if (h.dims != dims) throw ShapeError("mixed 2D/3D transforms in one batch");
    for (std::size_t e = 0; e < n * n; ++e) values.push_back(static_cast<T>(h.m[e]));
  }
  return TransformMatrix(Tensor<T>({per_sample.size(), n, n}, std::move(values)));
}

template <typename T>
Homogeneous TransformMatrix<T>::host(std::size_t b) const {
  Homogeneous h;
  h.dims = dims();
  const std::size_t n = dims() + 1;
  const T* v = entries_.data().data() + b * n * n;
  for (std::size_t e = 0; e < n * n; ++e) h.m[e] = static_cast<double>(v[e]);
  return h;
}

template <typename T>
SamplingGrid<T>::SamplingGrid(Tensor<T> coords) : coords_(std::move(coords)) {
  const Shape& s = coords_.shape();
  if (!((s.size() == 4 && s[3] == 2) || (s.size() == 5 && s[4] == 3)))
    throw ShapeError("sampling grid must be (N, H, W, 2) or (N, D, H, W, 3), got " + shape_str(s));
}

template <typename T>
Shape SamplingGrid<T>::extents() const {
  const Shape& s = coords_.shape();
  return Shape(s.begin() + 1, s.end() - 1);
}

template <typename T>
SamplingGrid<T> affine_grid(const TransformMatrix<T>& theta, const Shape& out_size) {
  if (out_size.size() != theta.dims())
    throw ShapeError("affine_grid: " + std::to_string(theta.dims()) + "D transform with output size " +
                     shape_str(out_size));
  for (std::size_t e : out_size)
    if (e == 0) throw ShapeError("affine_grid: output extents must be >= 1, got " + shape_str(out_size));
  const std::size_t n = theta.batch(), dims = theta.dims();
  Shape grid_shape{n};
  grid_shape.insert(grid_shape.end(), out_size.begin(), out_size.end());
  grid_shape.push_back(dims);
  std::vector<T> grid(shape_numel(grid_shape));
  kernels::affine_grid(theta.tensor().data().data(), n, out_size, grid.data());

  auto ti = theta.tensor().impl();
  Tensor<T> coords = detail::make_result<T>(
      grid_shape, std::move(grid), {theta.tensor()}, "affine_grid",
      [ti, n, out_size](std::span<const T> g, std::vector<std::vector<T>>& gin) {
        kernels::affine_grid_backward(ti->data.data(), n, out_size, g.data(), gin[0].data());
      });
  return SamplingGrid<T>(std::move(coords));
}

template <typename T>
Tensor<T> grid_sample(const Tensor<T>& x, const SamplingGrid<T>& grid, Padding padding) {
  const Tensor<T>& g = grid.tensor();
  if (x.rank() != grid.dims() + 2)
    throw ShapeError("grid_sample: input " + shape_str(x.shape()) + " does not match " +
                     std::to_string(grid.dims()) + "D grid");
  if (x.dim(0) != grid.batch())
    throw ShapeError("grid_sample: batch " + std::to_string(x.dim(0)) + " vs grid batch " +
                     std::to_string(grid.batch()));
  const Shape out_ext = grid.extents();
  Shape out_shape{x.dim(0), x.dim(1)};
  out_shape.insert(out_shape.end(), out_ext.begin(), out_ext.end());
  std::vector<T> out(shape_numel(out_shape));
  auto xi = x.impl(), gi = g.impl();

  if (grid.dims() == 2) {
    const kernels::ImageExtents in{x.dim(0), x.dim(1), x.dim(2), x.dim(3)};
    kernels::grid_sample2d(x.data().data(), in, g.data().data(), out_ext[0], out_ext[1], padding,
                           out.data());
    return detail::make_result<T>(
        out_shape, std::move(out), {x, g}, "grid_sample2d",
        [xi, gi, in, out_ext, padding](std::span<const T> go, std::vector<std::vector<T>>& gin) {
          kernels::grid_sample2d_backward(xi->data.data(), in, gi->data.data(), out_ext[0],
                                          out_ext[1], padding, go.data(),
                                          gin[0].empty() ? nullptr : gin[0].data(),
                                          gin[1].empty() ? nullptr : gin[1].data());
        });
  }
  const kernels::VolumeExtents in{x.dim(0), x.dim(1), x.dim(2), x.dim(3), x.dim(4)};
  kernels::grid_sample3d(x.data().data(), in, g.data().data(), out_ext[0], out_ext[1], out_ext[2],
                         padding, out.data());
  return detail::make_result<T>(
      out_shape, std::move(out), {x, g}, "grid_sample3d",
      [xi, gi, in, out_ext, padding](std::span<const T> go, std::vector<std::vector<T>>& gin) {
        kernels::grid_sample3d_backward(xi->data.data(), in, gi->data.data(), out_ext[0],
                                        out_ext[1], out_ext[2], padding, go.data(),
                                        gin[0].empty() ? nullptr : gin[0].data(),
                                        gin[1].empty() ? nullptr : gin[1].data());
      });
}

template <typename T>
Tensor<T> warp_by_matrix(const Tensor<T>& x, const TransformMatrix<T>& m, const Shape& out_size,
                         Padding padding) {
  return grid_sample(x, affine_grid(invert(m), out_size), padding);
}

template <typename T>
TransformMatrix<T> invert(const TransformMatrix<T>& m) {
  const std::size_t batch = m.batch(), n = m.dims() + 1;
  std::vector<T> out(batch * n * n);
  std::vector<double> inv_d(batch * n * n);
  const T* src = m.tensor().data().data();
  for (std::size_t b = 0; b < batch; ++b) {
    double a[16];
    for (std::size_t e = 0; e < n * n; ++e) a[e] = static_cast<double>(src[b * n * n + e]);
    const double det = adjugate_inverse(a, n, inv_d.data() + b * n * n);
    if (!(std::abs(det) >= kSingularDet)) throw SingularMatrixError(b, det);
    for (std::size_t e = 0; e < n * n; ++e) out[b * n * n + e] = static_cast<T>(inv_d[b * n * n + e]);
  }
  Tensor<T> entries = detail::make_result<T>(
      m.tensor().shape(), std::move(out), {m.tensor()}, "invert",
      [inv_d, batch, n](std::span<const T> g, std::vector<std::vector<T>>& gin) {
        // d(A^-1) = -A^-1 dA A^-1, so dL/dA = -A^-T G A^-T.
        for (std::size_t b = 0; b < batch; ++b) {
          const double* B = inv_d.data() + b * n * n;
          const T* G = g.data() + b * n * n;
          double tmp[16] = {};
          for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
              for (std::size_t k = 0; k < n; ++k)
                tmp[i * n + j] += B[k * n + i] * static_cast<double>(G[k * n + j]);
          for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
              double acc = 0.0;
              for (std::size_t k = 0; k < n; ++k) acc += tmp[i * n + k] * B[j * n + k];
              gin[0][b * n * n + i * n + j] -= static_cast<T>(acc);
            }
        }
      });
  return TransformMatrix<T>(std::move(entries));
}

template <typename T>
TransformMatrix<T> compose(const TransformMatrix<T>& later, const TransformMatrix<T>& earlier) {
  if (later.dims() != earlier.dims() || later.batch() != earlier.batch())
    throw ShapeError("compose: transforms " + shape_str(later.tensor().shape()) + " and " +
                     shape_str(earlier.tensor().shape()) + " differ in batch or dims");
  return TransformMatrix<T>(matmul(later.tensor(), earlier.tensor()));
}

Homogeneous homography_from_points(std::span<const double> src, std::span<const double> dst,
                                   std::size_t dims) {
  check_dims(dims);
  const std::size_t corners = dims == 2 ? 4 : 8;
  if (src.size() != corners * dims || dst.size() != corners * dims)
    throw ArgumentError("homography_from_points needs " + std::to_string(corners) + " " +
                        std::to_string(dims) + "D points on each side");
  const std::size_t s = dims + 1;
  const std::size_t unknowns = s * s - 1;
  const std::size_t rows = corners * dims;
  std::vector<double> A(rows * unknowns, 0.0), b(rows, 0.0);
  for (std::size_t c = 0; c < corners; ++c) {
    const double* p = src.data() + c * dims;
    const double* u = dst.data() + c * dims;
    for (std::size_t k = 0; k < dims; ++k) {
      double* row = A.data() + (c * dims + k) * unknowns;
      for (std::size_t j = 0; j < dims; ++j) {
        row[k * s + j] = p[j];
        row[dims * s + j] = -u[k] * p[j];
      }
      row[k * s + dims] = 1.0;
      b[c * dims + k] = u[k];
    }
  }
  const auto h = least_squares(std::move(A), std::move(b), rows, unknowns);
  Homogeneous out;
  out.dims = dims;
  for (std::size_t e = 0; e < unknowns; ++e) out.m[e] = h[e];
  out.m[unknowns] = 1.0;
  return out;
}

template <typename T>
TransformMatrix<T> perspective_from_points(std::span<const double> src,
                                           std::span<const double> dst, std::size_t batch,
                                           std::size_t dims) {
  check_dims(dims);
  const std::size_t per = (dims == 2 ? 4 : 8) * dims;
  if (src.size() != batch * per || dst.size() != batch * per)
    throw ArgumentError("perspective_from_points: expected " + std::to_string(batch * per) +
                        " coordinates per side");
  std::vector<Homogeneous> mats;
  mats.reserve(batch);
  for (std::size_t b = 0; b < batch; ++b)
    mats.push_back(homography_from_points(src.subspan(b * per, per), dst.subspan(b * per, per), dims));
  return TransformMatrix<T>::from_host(mats);
}

#define DDAUG_INSTANTIATE(T)                                                                      \
  template class TransformMatrix<T>;                                                              \
  template class SamplingGrid<T>;                                                                 \
  template SamplingGrid<T> affine_grid<T>(const TransformMatrix<T>&, const Shape&);               \
  template Tensor<T> grid_sample<T>(const Tensor<T>&, const SamplingGrid<T>&, Padding);           \
  template Tensor<T> warp_by_matrix<T>(const Tensor<T>&, const TransformMatrix<T>&, const Shape&, \
                                       Padding);                                                  \
  template TransformMatrix<T> invert<T>(const TransformMatrix<T>&);                               \
  template TransformMatrix<T> compose<T>(const TransformMatrix<T>&, const TransformMatrix<T>&);   \
  template TransformMatrix<T> perspective_from_points<T>(std::span<const double>,                 \
                                                         std::span<const double>, std::size_t,    \
                                                         std::size_t);

DDAUG_INSTANTIATE(float)
DDAUG_INSTANTIATE(double)
#undef DDAUG_INSTANTIATE

}  // namespace ddaug
