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

// Differentiable geometric primitives for (N, C, H, W) image batches and
// (N, C, D, H, W) volume batches.
//
// Coordinates are normalized per axis with align-corners semantics: -1 is the
// center of the first pixel and +1 the center of the last. Points are ordered
// (x, y[, z]) with x along the width axis. A TransformMatrix maps SOURCE
// normalized coordinates to DESTINATION normalized coordinates; warping
// samples through its inverse.

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "ddaug/kernels.hpp"
#include "ddaug/tensor.hpp"

namespace ddaug {

/// A (dims+1) x (dims+1) homogeneous matrix in double precision, used to
/// assemble per-sample transforms on the host.
struct Homogeneous {
  std::size_t dims = 2;
  std::array<double, 16> m{};  // row-major, first (dims+1)^2 entries used

  static Homogeneous identity(std::size_t dims);
  std::size_t size() const { return dims + 1; }
  double& operator()(std::size_t r, std::size_t c) { return m[r * size() + c]; }
  double operator()(std::size_t r, std::size_t c) const { return m[r * size() + c]; }
  Homogeneous operator*(const Homogeneous& rhs) const;
  /// Applies the matrix to a point with perspective divide.
  std::array<double, 3> apply(std::span<const double> point) const;
};

/// Pixel index coordinates to normalized coordinates for spatial extents
/// (H, W) or (D, H, W). Axes of extent 1 map pixel 0 to 0.
Homogeneous pixel_to_normalized(const Shape& extents);
Homogeneous normalized_to_pixel(const Shape& extents);

/// Closed-form inverse; throws SingularMatrixError when |det| < 1e-12.
Homogeneous inverse(const Homogeneous& h);

/// Per-sample homogeneous transforms, entries shaped (N, dims+1, dims+1).
template <typename T>
class TransformMatrix {
 public:
  TransformMatrix() = default;
  explicit TransformMatrix(Tensor<T> entries);

  static TransformMatrix identity(std::size_t batch, std::size_t dims);
  static TransformMatrix from_host(const std::vector<Homogeneous>& per_sample);

  std::size_t batch() const { return entries_.dim(0); }
  std::size_t dims() const { return entries_.dim(1) - 1; }
  const Tensor<T>& tensor() const { return entries_; }
  T at(std::size_t n, std::size_t r, std::size_t c) const { return entries_.at(n, r, c); }
  Homogeneous host(std::size_t n) const;

 private:
  Tensor<T> entries_;
};

/// Normalized source coordinates per output location, shaped (N, H, W, 2) or
/// (N, D, H, W, 3).
template <typename T>
class SamplingGrid {
 public:
  SamplingGrid() = default;
  explicit SamplingGrid(Tensor<T> coords);

  std::size_t batch() const { return coords_.dim(0); }
  std::size_t dims() const { return coords_.rank() - 2; }
  Shape extents() const;
  const Tensor<T>& tensor() const { return coords_; }

 private:
  Tensor<T> coords_;
};

/// Applies theta to the canonical normalized mesh of `out_size` ((H, W) or
/// (D, H, W)) with perspective divide. Differentiable w.r.t. theta.
template <typename T>
SamplingGrid<T> affine_grid(const TransformMatrix<T>& theta, const Shape& out_size);

/// Bilinear (2D) / trilinear (3D) sampling. Differentiable w.r.t. x and the
/// grid; at integer cell boundaries the coordinate derivative is the
/// right/upper cell's slope. Non-finite grid points sample 0.
template <typename T>
Tensor<T> grid_sample(const Tensor<T>& x, const SamplingGrid<T>& grid,
                      Padding padding = Padding::zeros);

/// grid_sample(x, affine_grid(invert(m), out_size), padding).
template <typename T>
Tensor<T> warp_by_matrix(const Tensor<T>& x, const TransformMatrix<T>& m, const Shape& out_size,
                         Padding padding = Padding::zeros);

/// Differentiable closed-form inverse per sample. Throws SingularMatrixError
/// naming the first sample with |det| < 1e-12.
template <typename T>
TransformMatrix<T> invert(const TransformMatrix<T>& m);

/// later * earlier: applying the result equals applying `earlier` then `later`.
template <typename T>
TransformMatrix<T> compose(const TransformMatrix<T>& later, const TransformMatrix<T>& earlier);

/// Homography taking `src` corners onto `dst` corners (4 points in 2D, 8 in
/// 3D, coordinates flattened point-major), last entry fixed to 1. Solved by
/// column-pivoted Householder least squares; throws DegenerateError when a
/// pivot falls below 1e-10.
Homogeneous homography_from_points(std::span<const double> src, std::span<const double> dst,
                                   std::size_t dims);

/// Batched form: src/dst hold batch * corners * dims values.
template <typename T>
TransformMatrix<T> perspective_from_points(std::span<const double> src,
                                           std::span<const double> dst, std::size_t batch,
                                           std::size_t dims);

}  // namespace ddaug
