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
#include <cstdint>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "ddaug/geometry.hpp"
#include "ddaug/random.hpp"
#include "ddaug/tensor.hpp"

namespace ddaug {

enum class LayerKind {
  normalize,
  denormalize,
  color_jitter,
  grayscale,
  solarize,
  equalize,
  sharpness,
  motion_blur,
  mixup,
  cutmix,
  horizontal_flip,
  vertical_flip,
  rotation,
  affine,
  perspective,
  center_crop,
  crop,
  resized_crop,
  erasing,
  horizontal_flip3d,
  vertical_flip3d,
  depthical_flip3d,
  center_crop3d,
  crop3d,
  affine3d,
  perspective3d,
};

const char* kind_name(LayerKind kind);
/// Throws FormatError naming the kind when it is unknown.
LayerKind kind_from_name(const std::string& name);
const std::vector<LayerKind>& all_kinds();

bool is_geometric(LayerKind kind);
std::size_t kind_dims(LayerKind kind);

struct Range {
  double lo = 0.0;
  double hi = 0.0;
};

/// Box constraint applied to a learnable parameter after each update.
struct ValidityBox {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
};

template <typename T>
struct AugLayer {
  LayerKind kind = LayerKind::horizontal_flip;
  std::size_t dims = 2;
  double p = 1.0;
  bool same_on_batch = false;
  std::vector<ParamSpec> specs;
  std::map<std::string, Tensor<T>> learnable;
  std::map<std::string, std::vector<double>> static_config;

  /// Moves `name` out of specs/static_config into a trainable tensor.
  void make_learnable(const std::string& name, const std::vector<double>& init);
  const ParamSpec* find_spec(const std::string& name) const;
  const std::vector<double>& config(const std::string& name) const;
  /// Checks names, ranges and required entries for this kind.
  void validate() const;
};

std::vector<std::string> learnable_names(LayerKind kind);
ValidityBox validity_box(LayerKind kind, const std::string& name);

template <typename T>
struct AugResult {
  Tensor<T> output;
  TransformMatrix<T> transform;
  std::vector<AugParams> params;
};

template <typename T>
AugResult<T> layer_forward(const AugLayer<T>& layer, const Tensor<T>& x, RngState& rng);

template <typename T>
struct NamedParam {
  std::string name;  // "<layer index>.<parameter>"
  Tensor<T> tensor;
  ValidityBox box;
};

template <typename T>
class Pipeline {
 public:
  static constexpr int kVersion = 1;

  Pipeline() = default;
  Pipeline(std::vector<AugLayer<T>> layers, std::uint64_t seed);

  std::vector<AugLayer<T>> layers;
  RngState rng;

  /// Layer i draws from derive(rng, i); the pipeline counter then advances
  /// by one so the next call sees fresh streams.
  AugResult<T> forward(const Tensor<T>& x);
  std::size_t dims() const;
  void validate() const;
  std::vector<NamedParam<T>> parameters() const;
  /// Independent copy for another thread: learnables deep-copied, stream
  /// derived from this pipeline's state and `index`.
  Pipeline clone_for_thread(std::uint64_t index) const;
};

namespace aug {

Range jitter(double amount);

template <typename T> AugLayer<T> normalize(std::vector<double> mean, std::vector<double> std);
template <typename T> AugLayer<T> denormalize(std::vector<double> mean, std::vector<double> std);
template <typename T>
AugLayer<T> color_jitter(Range brightness, Range contrast, Range saturation, Range hue,
                         double p = 1.0);
template <typename T> AugLayer<T> grayscale(double p = 1.0);
template <typename T> AugLayer<T> solarize(Range thresholds, double p = 1.0);
template <typename T> AugLayer<T> equalize(double p = 1.0);
template <typename T> AugLayer<T> sharpness(Range factor, double p = 1.0);
template <typename T>
AugLayer<T> motion_blur(std::size_t kernel_size, Range angle_deg, Range direction, double p = 1.0);
template <typename T> AugLayer<T> mixup(Range lam = {0.0, 1.0}, double p = 1.0);
template <typename T> AugLayer<T> cutmix(Range box_scale = {0.0, 1.0}, double p = 1.0);

template <typename T> AugLayer<T> horizontal_flip(double p = 0.5);
template <typename T> AugLayer<T> vertical_flip(double p = 0.5);
template <typename T> AugLayer<T> rotation(Range degrees, double p = 1.0);
/// translate is a fraction of the extent per axis, shear is in degrees.
template <typename T>
AugLayer<T> affine(Range degrees, Range translate = {}, Range scale = {1.0, 1.0},
                   Range shear = {}, double p = 1.0);
template <typename T> AugLayer<T> perspective(double distortion_scale, double p = 0.5);
template <typename T> AugLayer<T> center_crop(std::size_t height, std::size_t width);
template <typename T>
AugLayer<T> crop(std::size_t height, std::size_t width, std::size_t padding = 0);
template <typename T>
AugLayer<T> resized_crop(std::size_t height, std::size_t width, Range scale = {0.08, 1.0},
                         Range ratio = {3.0 / 4.0, 4.0 / 3.0}, double p = 1.0);
template <typename T>
AugLayer<T> erasing(Range scale = {0.02, 0.33}, Range ratio = {0.3, 3.3}, double fill = 0.0,
                    double p = 0.5);

template <typename T> AugLayer<T> horizontal_flip3d(double p = 0.5);
template <typename T> AugLayer<T> vertical_flip3d(double p = 0.5);
template <typename T> AugLayer<T> depthical_flip3d(double p = 0.5);
template <typename T>
AugLayer<T> center_crop3d(std::size_t depth, std::size_t height, std::size_t width);
template <typename T>
AugLayer<T> crop3d(std::size_t depth, std::size_t height, std::size_t width,
                   std::size_t padding = 0);
template <typename T>
AugLayer<T> affine3d(Range degrees, Range translate = {}, Range scale = {1.0, 1.0},
                     double p = 1.0);
template <typename T> AugLayer<T> perspective3d(double distortion_scale, double p = 0.5);

}  // namespace aug

}  // namespace ddaug
