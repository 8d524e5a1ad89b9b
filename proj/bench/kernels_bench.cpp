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

#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "ddaug/kernels.hpp"
#include "ddaug/random.hpp"

namespace {

using ddaug::Padding;
using ddaug::kernels::ImageExtents;

std::vector<float> noise(std::size_t count, std::uint64_t seed) {
  ddaug::RngState rng{seed, 0};
  std::vector<float> v(count);
  for (auto& e : v) e = static_cast<float>(rng.next_uniform());
  return v;
}

// Rotation by 0.3 rad with a slight zoom, as an affine_grid input.
std::vector<float> thetas(std::size_t n) {
  const float c = std::cos(0.3f) * 0.9f, s = std::sin(0.3f) * 0.9f;
  std::vector<float> t;
  for (std::size_t i = 0; i < n; ++i) t.insert(t.end(), {c, s, 0.05f, -s, c, -0.02f, 0.f, 0.f, 1.f});
  return t;
}

struct Fixture {
  ImageExtents ext;
  std::vector<float> x, grid, out;

  explicit Fixture(std::size_t size) : ext{8, 3, size, size} {
    x = noise(ext.n * ext.c * ext.plane(), 1);
    grid.resize(ext.n * ext.plane() * 2);
    const auto th = thetas(ext.n);
    ddaug::kernels::reference::affine_grid(th.data(), ext.n, {size, size}, grid.data());
    out.resize(x.size());
  }
};

template <bool Parallel>
void BM_GridSample(benchmark::State& state) {
  Fixture f(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    if constexpr (Parallel)
      ddaug::kernels::grid_sample2d(f.x.data(), f.ext, f.grid.data(), f.ext.h, f.ext.w, Padding::zeros,
                                    f.out.data());
    else
      ddaug::kernels::reference::grid_sample2d(f.x.data(), f.ext, f.grid.data(), f.ext.h, f.ext.w,
                                               Padding::zeros, f.out.data());
    benchmark::DoNotOptimize(f.out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(f.out.size()));
}

template <bool Parallel>
void BM_GridSampleBackward(benchmark::State& state) {
  Fixture f(static_cast<std::size_t>(state.range(0)));
  std::vector<float> gx(f.x.size()), gg(f.grid.size());
  const auto go = noise(f.out.size(), 2);
  for (auto _ : state) {
    std::fill(gx.begin(), gx.end(), 0.f);
    std::fill(gg.begin(), gg.end(), 0.f);
    if constexpr (Parallel)
      ddaug::kernels::grid_sample2d_backward(f.x.data(), f.ext, f.grid.data(), f.ext.h, f.ext.w,
                                             Padding::zeros, go.data(), gx.data(), gg.data());
    else
      ddaug::kernels::reference::grid_sample2d_backward(f.x.data(), f.ext, f.grid.data(), f.ext.h,
                                                        f.ext.w, Padding::zeros, go.data(), gx.data(),
                                                        gg.data());
    benchmark::DoNotOptimize(gx.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(f.out.size()));
}

template <bool Parallel>
void BM_AffineGrid(benchmark::State& state) {
  const auto size = static_cast<std::size_t>(state.range(0));
  const auto th = thetas(8);
  std::vector<float> grid(8 * size * size * 2);
  for (auto _ : state) {
    if constexpr (Parallel)
      ddaug::kernels::affine_grid(th.data(), 8, {size, size}, grid.data());
    else
      ddaug::kernels::reference::affine_grid(th.data(), 8, {size, size}, grid.data());
    benchmark::DoNotOptimize(grid.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(grid.size() / 2));
}

template <bool Parallel>
void BM_Correlate(benchmark::State& state) {
  Fixture f(static_cast<std::size_t>(state.range(0)));
  const std::vector<float> k = {1 / 16.f, 2 / 16.f, 1 / 16.f, 2 / 16.f, 4 / 16.f,
                                2 / 16.f, 1 / 16.f, 2 / 16.f, 1 / 16.f};
  for (auto _ : state) {
    if constexpr (Parallel)
      ddaug::kernels::correlate2d(f.x.data(), f.ext, k.data(), false, 3, 3, f.out.data());
    else
      ddaug::kernels::reference::correlate2d(f.x.data(), f.ext, k.data(), false, 3, 3, f.out.data());
    benchmark::DoNotOptimize(f.out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(f.out.size()));
}

template <bool Parallel>
void BM_SumAxes(benchmark::State& state) {
  const auto size = static_cast<std::size_t>(state.range(0));
  const ddaug::Shape shape{8, 3, size, size};
  const auto x = noise(ddaug::shape_numel(shape), 3);
  const std::vector<bool> reduce{false, false, true, true};
  std::vector<float> out(24);
  for (auto _ : state) {
    if constexpr (Parallel)
      ddaug::kernels::sum_axes(x.data(), shape, reduce, out.data());
    else
      ddaug::kernels::reference::sum_axes(x.data(), shape, reduce, out.data());
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(x.size()));
}

}  // namespace

BENCHMARK(BM_GridSample<false>)->Name("grid_sample2d/serial")->Arg(64)->Arg(224);
BENCHMARK(BM_GridSample<true>)->Name("grid_sample2d/openmp")->Arg(64)->Arg(224);
BENCHMARK(BM_GridSampleBackward<false>)->Name("grid_sample2d_backward/serial")->Arg(64)->Arg(224);
BENCHMARK(BM_GridSampleBackward<true>)->Name("grid_sample2d_backward/openmp")->Arg(64)->Arg(224);
BENCHMARK(BM_AffineGrid<false>)->Name("affine_grid/serial")->Arg(224);
BENCHMARK(BM_AffineGrid<true>)->Name("affine_grid/openmp")->Arg(224);
BENCHMARK(BM_Correlate<false>)->Name("correlate2d/serial")->Arg(224);
BENCHMARK(BM_Correlate<true>)->Name("correlate2d/openmp")->Arg(224);
BENCHMARK(BM_SumAxes<false>)->Name("sum_axes/serial")->Arg(224);
BENCHMARK(BM_SumAxes<true>)->Name("sum_axes/openmp")->Arg(224);

BENCHMARK_MAIN();
