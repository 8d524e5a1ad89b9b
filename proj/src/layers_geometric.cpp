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

#include <cmath>
#include <numbers>

#include "ddaug/ops.hpp"
#include "layers_internal.hpp"

namespace ddaug::detail {

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;

Homogeneous translation(std::size_t dims, const double* t) {
  Homogeneous h = Homogeneous::identity(dims);
  for (std::size_t k = 0; k < dims; ++k) h(k, dims) = t[k];
  return h;
}

Homogeneous diagonal(std::size_t dims, const double* d) {
  Homogeneous h = Homogeneous::identity(dims);
  for (std::size_t k = 0; k < dims; ++k) h(k, k) = d[k];
  return h;
}

// Rotation in the (a, b) coordinate plane; counter-clockwise as displayed
// for the (x, y) plane because y grows downwards.
Homogeneous plane_rotation(std::size_t dims, std::size_t a, std::size_t b, double radians) {
  Homogeneous h = Homogeneous::identity(dims);
  const double c = std::cos(radians), s = std::sin(radians);
  h(a, a) = c;
  h(a, b) = s;
  h(b, a) = -s;
  h(b, b) = c;
  return h;
}

// Pixel-space center (x, y[, z]) of the given (.., H, W) extents.
std::array<double, 3> center_of(const Shape& ext) {
  std::array<double, 3> c{};
  for (std::size_t k = 0; k < ext.size(); ++k)
    c[k] = (static_cast<double>(ext[ext.size() - 1 - k]) - 1.0) / 2.0;
  return c;
}

Homogeneous to_normalized(const Homogeneous& pix, const Shape& in_ext, const Shape& out_ext) {
  return pixel_to_normalized(out_ext) * pix * normalized_to_pixel(in_ext);
}

// Source -> canvas map for a window starting at `origin` (x, y[, z]) whose
// first and last pixel centers land on the canvas's first and last ones.
Homogeneous window_map(const double* origin, const double* window, const Shape& out_ext) {
  const std::size_t dims = out_ext.size();
  double scale[3], shift[3];
  for (std::size_t k = 0; k < dims; ++k) {
    const double out = static_cast<double>(out_ext[dims - 1 - k]);
    scale[k] = (window[k] > 1.0 && out > 1.0) ? (out - 1.0) / (window[k] - 1.0) : 1.0;
    shift[k] = -origin[k];
  }
  return diagonal(dims, scale) * translation(dims, shift);
}

Shape static_size(const std::vector<double>& v) {
  Shape s;
  for (double e : v) s.push_back(static_cast<std::size_t>(e));
  return s;
}

std::vector<double> cube_corners(std::size_t dims) {
  if (dims == 2) return {-1, -1, 1, -1, 1, 1, -1, 1};
  std::vector<double> c;
  for (int z : {-1, 1})
    for (int y : {-1, 1})
      for (int x : {-1, 1}) c.insert(c.end(), {double(x), double(y), double(z)});
  return c;
}

Homogeneous affine_matrix(const Selection& sel, std::size_t k, const Shape& ext, std::size_t dims) {
  const auto c = center_of(ext);
  double t[3], neg_c[3], s[3];
  for (std::size_t a = 0; a < dims; ++a) {
    t[a] = c[a] + sel.get("translate", k, a) * static_cast<double>(ext[dims - 1 - a]);
    neg_c[a] = -c[a];
    s[a] = sel.get("scale", k);
  }
  Homogeneous m = translation(dims, t);
  if (dims == 2) {
    m = m * plane_rotation(2, 0, 1, sel.get("angle", k) * kDegToRad);
    m = m * diagonal(2, s);
    Homogeneous shear = Homogeneous::identity(2);
    shear(0, 1) = std::tan(sel.get("shear", k, 0) * kDegToRad);
    shear(1, 0) = std::tan(sel.get("shear", k, 1) * kDegToRad);
    m = m * shear;
  } else {
    m = m * plane_rotation(3, 0, 1, sel.get("angle", k, 2) * kDegToRad);
    m = m * plane_rotation(3, 2, 0, sel.get("angle", k, 1) * kDegToRad);
    m = m * plane_rotation(3, 1, 2, sel.get("angle", k, 0) * kDegToRad);
    m = m * diagonal(3, s);
  }
  return to_normalized(m * translation(dims, neg_c), ext, ext);
}

Homogeneous perspective_matrix(const Selection& sel, std::size_t k, std::size_t dims) {
  const std::vector<double> src = cube_corners(dims);
  std::vector<double> dst = src;
  for (std::size_t i = 0; i < src.size(); ++i) dst[i] -= src[i] * sel.get("offsets", k, i);
  return homography_from_points(src, dst, dims);
}

Homogeneous crop_matrix(const Selection& sel, std::size_t k, const Shape& in_ext, const Shape& out_ext,
                        double padding) {
  const std::size_t dims = in_ext.size();
  double origin[3], window[3];
  for (std::size_t a = 0; a < dims; ++a) {
    const double in = static_cast<double>(in_ext[dims - 1 - a]);
    const double out = static_cast<double>(out_ext[dims - 1 - a]);
    const double room = in + 2.0 * padding - out;
    origin[a] = std::min(std::floor(sel.get("offset", k, a) * (room + 1.0)), room) - padding;
    window[a] = out;
  }
  return to_normalized(window_map(origin, window, out_ext), in_ext, out_ext);
}

Homogeneous center_crop_matrix(const Shape& in_ext, const Shape& out_ext) {
  const std::size_t dims = in_ext.size();
  double origin[3], window[3];
  for (std::size_t a = 0; a < dims; ++a) {
    origin[a] = std::floor((static_cast<double>(in_ext[dims - 1 - a]) -
                            static_cast<double>(out_ext[dims - 1 - a])) / 2.0);
    window[a] = static_cast<double>(out_ext[dims - 1 - a]);
  }
  return to_normalized(window_map(origin, window, out_ext), in_ext, out_ext);
}

Homogeneous resized_crop_matrix(const Selection& sel, std::size_t k, const Shape& in_ext,
                                const Shape& out_ext) {
  const std::size_t h = in_ext[0], w = in_ext[1];
  const Box b = draw_box(h, w, sel, k, 2).value_or(Box{0, 0, w, h});
  const double origin[2] = {static_cast<double>(b.x0), static_cast<double>(b.y0)};
  const double window[2] = {static_cast<double>(b.w), static_cast<double>(b.h)};
  return to_normalized(window_map(origin, window, out_ext), in_ext, out_ext);
}

void check_fits(const Shape& in_ext, const Shape& out_ext, double padding, const char* who) {
  for (std::size_t a = 0; a < in_ext.size(); ++a)
    if (static_cast<double>(out_ext[a]) > static_cast<double>(in_ext[a]) + 2.0 * padding)
      throw ShapeError(std::string(who) + ": crop size " + shape_str(out_ext) +
                       " exceeds input extents " + shape_str(in_ext));
}

// Learnable rotation about the image center as a graph-connected (1, 3, 3)
// normalized-coordinate matrix.
template <typename T>
Tensor<T> rotation_tensor(const Tensor<T>& degrees, const Shape& ext) {
  auto axis_scale = [](std::size_t L) { return L > 1 ? 2.0 / static_cast<double>(L - 1) : 1.0; };
  const double sx = axis_scale(ext[1]), sy = axis_scale(ext[0]);
  const Tensor<T> rad = degrees * static_cast<T>(kDegToRad);
  const Tensor<T> c = cos(rad), s = sin(rad);
  const Tensor<T> zero = Tensor<T>::zeros({1}), one = Tensor<T>::ones({1});
  const Tensor<T> flat = concat<T>({c, s * static_cast<T>(sx / sy), zero, -(s * static_cast<T>(sy / sx)),
                                    c, zero, zero, zero, one},
                                   0);
  return reshape(flat, {1, 3, 3});
}

}  // namespace

template <typename T>
GeometricOutput<T> run_geometric(const AugLayer<T>& layer, const Tensor<T>& x, const Selection& sel) {
  const std::size_t k_count = sel.size(), dims = layer.dims;
  const Shape in_ext(x.shape().begin() + 2, x.shape().end());
  Shape out_ext = in_ext;
  std::vector<Homogeneous> mats;
  mats.reserve(k_count);
  GeometricOutput<T> r;

  auto constant = [&](const Homogeneous& h) {
    mats.assign(k_count, h);
  };
  auto flip_layer = [&](std::size_t axis, std::size_t coord) {
    double d[3] = {1.0, 1.0, 1.0};
    d[coord] = -1.0;
    constant(diagonal(dims, d));
    r.output = flip(x, axis);
    r.mats = TransformMatrix<T>::from_host(mats).tensor();
    return r;
  };

  switch (layer.kind) {
    case LayerKind::horizontal_flip:
      return flip_layer(3, 0);
    case LayerKind::vertical_flip:
      return flip_layer(2, 1);
    case LayerKind::horizontal_flip3d:
      return flip_layer(4, 0);
    case LayerKind::vertical_flip3d:
      return flip_layer(3, 1);
    case LayerKind::depthical_flip3d:
      return flip_layer(2, 2);
    case LayerKind::rotation: {
      auto it = layer.learnable.find("angle");
      if (it != layer.learnable.end()) {
        r.mats = broadcast_to(rotation_tensor(it->second, in_ext), {k_count, 3, 3});
        r.output = warp_by_matrix(x, TransformMatrix<T>(r.mats), out_ext);
        return r;
      }
      const auto c = center_of(in_ext);
      const double neg_c[2] = {-c[0], -c[1]};
      for (std::size_t k = 0; k < k_count; ++k)
        mats.push_back(to_normalized(translation(2, c.data()) *
                                         plane_rotation(2, 0, 1, sel.get("angle", k) * kDegToRad) *
                                         translation(2, neg_c),
                                     in_ext, in_ext));
      break;
    }
    case LayerKind::affine:
    case LayerKind::affine3d:
      for (std::size_t k = 0; k < k_count; ++k) mats.push_back(affine_matrix(sel, k, in_ext, dims));
      break;
    case LayerKind::perspective:
    case LayerKind::perspective3d:
      for (std::size_t k = 0; k < k_count; ++k) mats.push_back(perspective_matrix(sel, k, dims));
      break;
    case LayerKind::center_crop:
    case LayerKind::center_crop3d:
      out_ext = static_size(layer.config("size"));
      check_fits(in_ext, out_ext, 0.0, kind_name(layer.kind));
      constant(center_crop_matrix(in_ext, out_ext));
      break;
    case LayerKind::crop:
    case LayerKind::crop3d: {
      out_ext = static_size(layer.config("size"));
      const double padding = layer.config("padding")[0];
      check_fits(in_ext, out_ext, padding, kind_name(layer.kind));
      for (std::size_t k = 0; k < k_count; ++k)
        mats.push_back(crop_matrix(sel, k, in_ext, out_ext, padding));
      break;
    }
    case LayerKind::resized_crop:
      out_ext = static_size(layer.config("size"));
      for (std::size_t k = 0; k < k_count; ++k)
        mats.push_back(resized_crop_matrix(sel, k, in_ext, out_ext));
      break;
    default:
      throw ArgumentError(std::string(kind_name(layer.kind)) + " is not a geometric layer");
  }
  r.mats = TransformMatrix<T>::from_host(mats).tensor();
  r.output = warp_by_matrix(x, TransformMatrix<T>(r.mats), out_ext);
  return r;
}

template GeometricOutput<float> run_geometric<float>(const AugLayer<float>&, const Tensor<float>&,
                                                     const Selection&);
template GeometricOutput<double> run_geometric<double>(const AugLayer<double>&,
                                                       const Tensor<double>&, const Selection&);

}  // namespace ddaug::detail
