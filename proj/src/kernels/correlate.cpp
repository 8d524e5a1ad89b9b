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

#include <algorithm>

#include "ddaug/kernels.hpp"

namespace ddaug::kernels {

template <typename T>
void correlate2d(const T* x, const ImageExtents& ext, const T* kernel, bool per_sample,
                 std::size_t kh, std::size_t kw, T* out) {
  const auto ry = static_cast<std::ptrdiff_t>(kh / 2);
  const auto rx = static_cast<std::ptrdiff_t>(kw / 2);
  const auto H = static_cast<std::ptrdiff_t>(ext.h);
  const auto W = static_cast<std::ptrdiff_t>(ext.w);
  const auto planes = static_cast<std::ptrdiff_t>(ext.n * ext.c);

#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t pc = 0; pc < planes; ++pc) {
    const std::size_t n = static_cast<std::size_t>(pc) / ext.c;
    const T* k = kernel + (per_sample ? n * kh * kw : 0);
    const T* src = x + static_cast<std::size_t>(pc) * ext.plane();
    T* dst = out + static_cast<std::size_t>(pc) * ext.plane();
    for (std::ptrdiff_t i = 0; i < H; ++i) {
      for (std::ptrdiff_t j = 0; j < W; ++j) {
        T acc = T(0);
        for (std::ptrdiff_t di = -ry; di <= ry; ++di) {
          const std::ptrdiff_t y = i + di;
          if (y < 0 || y >= H) continue;
          const T* krow = k + (di + ry) * static_cast<std::ptrdiff_t>(kw) + rx;
          const T* srow = src + y * W;
          const std::ptrdiff_t lo = std::max<std::ptrdiff_t>(-rx, -j);
          const std::ptrdiff_t hi = std::min<std::ptrdiff_t>(rx, W - 1 - j);
          for (std::ptrdiff_t dj = lo; dj <= hi; ++dj) acc += krow[dj] * srow[j + dj];
        }
        dst[i * W + j] = acc;
      }
    }
  }
}

template void correlate2d<float>(const float*, const ImageExtents&, const float*, bool,
                                 std::size_t, std::size_t, float*);
template void correlate2d<double>(const double*, const ImageExtents&, const double*, bool,
                                  std::size_t, std::size_t, double*);

}  // namespace ddaug::kernels
