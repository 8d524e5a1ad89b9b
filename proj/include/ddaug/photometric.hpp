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

#include "ddaug/ops.hpp"
#include "ddaug/tensor.hpp"

namespace ddaug {

inline constexpr double kLumaWeights[3] = {0.299, 0.587, 0.114};

// Per-sample parameters are tensors of shape {N} or {1}; a {1} tensor is
// shared by the whole batch. Images are (N, C, H, W) with values in [0, 1].

template <typename T>
Tensor<T> normalize(const Tensor<T>& x, const Tensor<T>& mean, const Tensor<T>& std);

template <typename T>
Tensor<T> denormalize(const Tensor<T>& x, const Tensor<T>& mean, const Tensor<T>& std);

template <typename T>
Tensor<T> adjust_brightness(const Tensor<T>& x, const Tensor<T>& factor);

template <typename T>
Tensor<T> adjust_contrast(const Tensor<T>& x, const Tensor<T>& factor);

template <typename T>
Tensor<T> adjust_saturation(const Tensor<T>& x, const Tensor<T>& factor);

/// Rotates the chroma plane of YIQ by `shift` radians.
template <typename T>
Tensor<T> adjust_hue(const Tensor<T>& x, const Tensor<T>& shift);

template <typename T>
Tensor<T> grayscale(const Tensor<T>& x);

template <typename T>
Tensor<T> solarize(const Tensor<T>& x, const std::vector<double>& thresholds);

template <typename T>
Tensor<T> equalize(const Tensor<T>& x);

template <typename T>
Tensor<T> sharpness(const Tensor<T>& x, const Tensor<T>& factor);

/// Line kernel through the center at `angle_deg` (counter-clockwise as
/// displayed). direction -1 puts the weight on the trailing end, +1 on the
/// leading end, 0 is uniform.
std::vector<double> motion_blur_kernel(std::size_t size, double angle_deg, double direction);

template <typename T>
Tensor<T> motion_blur(const Tensor<T>& x, std::size_t kernel_size,
                      const std::vector<double>& angles_deg,
                      const std::vector<double>& directions);

struct Box {
  std::size_t x0 = 0;
  std::size_t y0 = 0;
  std::size_t w = 0;
  std::size_t h = 0;
};

template <typename T>
struct MixResult {
  Tensor<T> output;
  std::vector<double> lam;
  std::vector<std::size_t> perm;
};

template <typename T>
MixResult<T> mixup(const Tensor<T>& x, const Tensor<T>& lam, const std::vector<std::size_t>& perm);

template <typename T>
MixResult<T> cutmix(const Tensor<T>& x, const std::vector<Box>& boxes,
                    const std::vector<std::size_t>& perm);

template <typename T>
Tensor<T> erase(const Tensor<T>& x, const std::vector<Box>& boxes, T fill);

}  // namespace ddaug
