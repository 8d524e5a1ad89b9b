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
#include <optional>
#include <string>
#include <vector>

#include "ddaug/layers.hpp"
#include "ddaug/photometric.hpp"

namespace ddaug::detail {

// The draws of the samples a layer actually transforms.
struct Selection {
  const AugParams& params;
  std::vector<std::size_t> idx;

  std::size_t size() const { return idx.size(); }
  double get(const std::string& name, std::size_t k, std::size_t component = 0) const {
    return params.get(name, idx[k], component);
  }
};

inline constexpr std::size_t kBoxAttempts = 10;

/// Rejection-samples a box of `scale` area fraction and exp(`log_ratio`)
/// aspect from the draws of sample k; nullopt when all attempts miss.
std::optional<Box> draw_box(std::size_t height, std::size_t width, const Selection& sel,
                            std::size_t k, std::size_t min_side);

template <typename T>
struct GeometricOutput {
  Tensor<T> output;
  Tensor<T> mats;  // (K, d+1, d+1)
};

template <typename T>
GeometricOutput<T> run_geometric(const AugLayer<T>& layer, const Tensor<T>& x,
                                 const Selection& sel);

template <typename T>
Tensor<T> run_pixelwise(const AugLayer<T>& layer, const Tensor<T>& x, const Selection& sel);

template <typename T>
Tensor<T> run_mixing(const AugLayer<T>& layer, const Tensor<T>& x, AugParams& params);

}  // namespace ddaug::detail
