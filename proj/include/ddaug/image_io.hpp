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

#include <cstdint>
#include <filesystem>
#include <vector>

#include "ddaug/tensor.hpp"

namespace ddaug {

/// Byte for a [0, 1] value: round(clamp(v, 0, 1) * 255), no gamma.
std::uint8_t quantize(double v);

/// Writes a (1, 3, H, W) or (3, H, W) image as binary PPM (P6, maxval 255).
template <typename T>
void write_ppm(const std::filesystem::path& path, const Tensor<T>& image);

/// Reads a binary PPM (maxval 255) into a (1, 3, H, W) tensor in [0, 1].
template <typename T>
Tensor<T> read_ppm(const std::filesystem::path& path);

/// Places single-sample images next to each other along the width.
template <typename T>
Tensor<T> side_by_side(const std::vector<Tensor<T>>& images);

}  // namespace ddaug
