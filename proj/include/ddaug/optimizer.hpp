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
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "ddaug/layers.hpp"

namespace ddaug {

struct OptimState {
  double learning_rate = 0.01;
  double momentum = 0.0;
  std::size_t step_count = 0;
  std::map<std::string, std::vector<double>> buffers;  // keyed by parameter name
};

/// p <- p - lr * v with v = momentum * v + grad, then projection into the
/// parameter's box; grads are zeroed afterwards. Throws GraphError listing
/// every parameter without a gradient.
template <typename T>
void sgd_step(const std::vector<NamedParam<T>>& params, OptimState& state);

template <typename T>
Tensor<T> mse_loss(const Tensor<T>& a, const Tensor<T>& b);

/// Repeats forward -> MSE against target -> backward -> sgd_step and returns
/// the loss of every step.
template <typename T>
std::vector<double> optimize_to_target(Pipeline<T>& pipe, const Tensor<T>& x, const Tensor<T>& target,
                                       std::size_t steps, double lr, double momentum = 0.0);

/// Smooth (1, 3, H, W) test image whose values stay inside [0.35, 0.49], so
/// brightness factors up to 2 never saturate.
template <typename T>
Tensor<T> demo_image(std::size_t height, std::size_t width);

/// Single-sample brightness-recovery run: ColorJitter with learnable
/// brightness `init`, all other components at identity.
template <typename T>
Pipeline<T> brightness_pipeline(double init, std::uint64_t seed);

struct TripletReport {
  std::filesystem::path original;
  std::filesystem::path augmented;
  std::filesystem::path updated;
  std::filesystem::path panel;
  std::vector<double> losses;
};

/// Writes original.ppm, augmented.ppm, updated.ppm and panel.ppm (the three
/// side by side) into `dir`. The updated image is the pipeline output after
/// optimizing its learnables towards x; without learnables it equals the
/// augmented image.
template <typename T>
TripletReport export_triplet(Pipeline<T>& pipe, const Tensor<T>& x, const std::filesystem::path& dir,
                             std::size_t steps = 200, double lr = 0.05);

}  // namespace ddaug
