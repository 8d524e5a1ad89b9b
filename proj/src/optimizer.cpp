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

#include "ddaug/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "ddaug/image_io.hpp"
#include "ddaug/ops.hpp"

namespace ddaug {

template <typename T>
void sgd_step(const std::vector<NamedParam<T>>& params, OptimState& state) {
  if (!(state.learning_rate > 0.0)) throw ArgumentError("learning rate must be > 0");
  std::string missing;
  for (const auto& p : params)
    if (!p.tensor.has_grad()) missing += (missing.empty() ? "" : ", ") + p.name;
  if (!missing.empty()) throw GraphError("no gradient for parameter(s): " + missing);

  for (const auto& p : params) {
    Tensor<T> t = p.tensor;
    auto values = t.mutable_data();
    const auto grad = t.grad();
    auto& buf = state.buffers[p.name];
    if (buf.size() != values.size()) buf.assign(values.size(), 0.0);
    for (std::size_t i = 0; i < values.size(); ++i) {
      buf[i] = state.momentum * buf[i] + static_cast<double>(grad[i]);
      const double next = static_cast<double>(values[i]) - state.learning_rate * buf[i];
      values[i] = static_cast<T>(std::clamp(next, p.box.lo, p.box.hi));
    }
    t.zero_grad();
  }
  ++state.step_count;
}

template <typename T>
Tensor<T> mse_loss(const Tensor<T>& a, const Tensor<T>& b) {
  if (a.shape() != b.shape())
    throw ShapeError("mse_loss: " + shape_str(a.shape()) + " vs " + shape_str(b.shape()));
  const Tensor<T> d = a - b;
  return mean(d * d);
}

template <typename T>
std::vector<double> optimize_to_target(Pipeline<T>& pipe, const Tensor<T>& x, const Tensor<T>& target,
                                       std::size_t steps, double lr, double momentum) {
  const auto params = pipe.parameters();
  if (params.empty()) throw ArgumentError("optimize_to_target: pipeline has no learnable parameters");
  if (x.shape() != target.shape())
    throw ShapeError("optimize_to_target: input " + shape_str(x.shape()) + " vs target " +
                     shape_str(target.shape()));
  OptimState state;
  state.learning_rate = lr;
  state.momentum = momentum;
  for (const auto& p : params) p.tensor.impl()->grad.clear();
  std::vector<double> trace;
  trace.reserve(steps);
  for (std::size_t s = 0; s < steps; ++s) {
    const Tensor<T> loss = mse_loss(pipe.forward(x).output, target);
    trace.push_back(static_cast<double>(loss.item()));
    backward(loss);
    for (const auto& p : params)
      if (!p.tensor.has_grad()) p.tensor.impl()->grad.assign(p.tensor.numel(), T(0));
    sgd_step(params, state);
  }
  return trace;
}

template <typename T>
Tensor<T> demo_image(std::size_t height, std::size_t width) {
  std::vector<T> v(3 * height * width);
  for (std::size_t c = 0; c < 3; ++c)
    for (std::size_t i = 0; i < height; ++i)
      for (std::size_t j = 0; j < width; ++j) {
        const double u = height > 1 ? static_cast<double>(i) / static_cast<double>(height - 1) : 0.0;
        const double w = width > 1 ? static_cast<double>(j) / static_cast<double>(width - 1) : 0.0;
        const double phase = 2.0 * std::numbers::pi * (u + 0.5 * w) + 2.0 * static_cast<double>(c);
        v[(c * height + i) * width + j] = static_cast<T>(0.42 + 0.07 * std::sin(phase));
      }
  return Tensor<T>({1, 3, height, width}, std::move(v));
}

template <typename T>
Pipeline<T> brightness_pipeline(double init, std::uint64_t seed) {
  auto jitter = aug::color_jitter<T>({1.0, 1.0}, {1.0, 1.0}, {1.0, 1.0}, {0.0, 0.0});
  jitter.make_learnable("brightness", {init});
  return Pipeline<T>({jitter}, seed);
}

template <typename T>
TripletReport export_triplet(Pipeline<T>& pipe, const Tensor<T>& x, const std::filesystem::path& dir,
                             std::size_t steps, double lr) {
  if (x.rank() != 4 || x.dim(0) != 1 || x.dim(1) != 3)
    throw ShapeError("export_triplet: expected a (1, 3, H, W) image, got " + shape_str(x.shape()));
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create '" + dir.string() + "': " + ec.message());

  TripletReport report;
  Pipeline<T> replay = pipe;
  Tensor<T> augmented;
  {
    NoGradGuard guard;
    augmented = pipe.forward(x).output.detach();
  }
  Tensor<T> updated = augmented;
  if (!pipe.parameters().empty()) {
    report.losses = optimize_to_target(pipe, x, x.detach(), steps, lr);
    NoGradGuard guard;
    updated = replay.forward(x).output.detach();
  }
  report.original = dir / "original.ppm";
  report.augmented = dir / "augmented.ppm";
  report.updated = dir / "updated.ppm";
  report.panel = dir / "panel.ppm";
  write_ppm(report.original, x);
  write_ppm(report.augmented, augmented);
  write_ppm(report.updated, updated);
  write_ppm(report.panel, side_by_side<T>({x, augmented, updated}));
  return report;
}

#define DDAUG_INSTANTIATE(T)                                                                        \
  template void sgd_step<T>(const std::vector<NamedParam<T>>&, OptimState&);                        \
  template Tensor<T> mse_loss<T>(const Tensor<T>&, const Tensor<T>&);                               \
  template std::vector<double> optimize_to_target<T>(Pipeline<T>&, const Tensor<T>&,                \
                                                     const Tensor<T>&, std::size_t, double, double); \
  template Tensor<T> demo_image<T>(std::size_t, std::size_t);                                       \
  template Pipeline<T> brightness_pipeline<T>(double, std::uint64_t);                               \
  template TripletReport export_triplet<T>(Pipeline<T>&, const Tensor<T>&,                          \
                                           const std::filesystem::path&, std::size_t, double);

DDAUG_INSTANTIATE(float)
DDAUG_INSTANTIATE(double)
#undef DDAUG_INSTANTIATE

}  // namespace ddaug
