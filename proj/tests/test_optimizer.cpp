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


#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>

#include "ddaug/image_io.hpp"
#include "ddaug/ops.hpp"
#include "ddaug/optimizer.hpp"
#include "test_util.hpp"

namespace ddaug {
namespace {

namespace fs = std::filesystem;
using testing::random_tensor;

NamedParam<double> param(double value, double grad, ValidityBox box = {}) {
  Tensor64 t({1}, {value});
  t.set_requires_grad(true);
  backward(sum(t * grad));
  return {"0.p", t, box};
}

TEST(Sgd, UpdateRuleProjectionAndZeroGrad) {
  OptimState s;
  s.learning_rate = 0.1;
  auto a = param(1.0, 0.5);
  sgd_step<double>({a}, s);
  EXPECT_DOUBLE_EQ(a.tensor.item(), 0.95);
  EXPECT_FALSE(a.tensor.has_grad());
  EXPECT_EQ(s.step_count, 1u);

  auto b = param(0.01, 1.0, {0.0, INFINITY});
  sgd_step<double>({b}, s);
  EXPECT_EQ(b.tensor.item(), 0.0);

  auto c = param(0.7, 0.0);
  sgd_step<double>({c}, s);
  EXPECT_EQ(c.tensor.item(), 0.7);
}

TEST(Sgd, MissingGradListsNames) {
  Tensor64 t({1}, {1.0});
  t.set_requires_grad(true);
  OptimState s;
  try {
    sgd_step<double>({{"3.hue", t, {}}}, s);
    FAIL();
  } catch (const GraphError& e) {
    EXPECT_NE(std::string(e.what()).find("3.hue"), std::string::npos);
  }
}

TEST(Sgd, Momentum) {
  OptimState s;
  s.learning_rate = 0.1;
  s.momentum = 0.9;
  auto a = param(1.0, 1.0);
  sgd_step<double>({a}, s);
  backward(sum(a.tensor * 1.0));
  sgd_step<double>({a}, s);
  EXPECT_NEAR(a.tensor.item(), 1.0 - 0.1 - 0.1 * 1.9, 1e-12);
}

double direct_loss(const Tensor64& x, double b) {
  double s = 0.0;
  for (double v : x.data()) {
    const double d = std::clamp(v * b, 0.0, 1.0) - v;
    s += d * d;
  }
  return s / static_cast<double>(x.numel());
}

// Golden-section minimizer of the brightness loss, evaluated without autodiff.
double line_search(const Tensor64& x, double lo, double hi) {
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  for (int i = 0; i < 200; ++i) {
    const double a = hi - g * (hi - lo), b = lo + g * (hi - lo);
    if (direct_loss(x, a) < direct_loss(x, b))
      hi = b;
    else
      lo = a;
  }
  return (lo + hi) / 2.0;
}

TEST(Optimize, BrightnessRecovery) {
  const auto x = demo_image<double>(32, 32);
  auto pipe = brightness_pipeline<double>(2.0, 0);
  const auto trace = optimize_to_target(pipe, x, x, 200, 0.05);
  ASSERT_EQ(trace.size(), 200u);
  const double b = pipe.layers[0].learnable.at("brightness").item();
  EXPECT_NEAR(b, line_search(x, 0.0, 3.0), 0.05);
  EXPECT_NEAR(b, 1.0, 0.05);
  EXPECT_LT(trace.back(), trace.front());
}

TEST(Optimize, DescentAtSmallRateAndDeterminism) {
  const auto x = demo_image<float>(24, 24);
  auto a = brightness_pipeline<float>(2.0, 3), b = brightness_pipeline<float>(2.0, 3);
  const auto ta = optimize_to_target(a, x, x, 200, 0.01), tb = optimize_to_target(b, x, x, 200, 0.01);
  EXPECT_EQ(ta, tb);
  for (std::size_t i = 1; i < ta.size(); ++i) EXPECT_LE(ta[i], ta[i - 1]) << "step " << i;
}

TEST(Optimize, ZeroStepsAndErrors) {
  const auto x = demo_image<float>(8, 8);
  auto pipe = brightness_pipeline<float>(1.5, 0);
  EXPECT_TRUE(optimize_to_target(pipe, x, pipe.forward(x).output.detach(), 0, 0.1).empty());
  EXPECT_EQ(pipe.layers[0].learnable.at("brightness").item(), 1.5f);
  Pipeline<float> none({aug::grayscale<float>()}, 0);
  EXPECT_THROW(optimize_to_target(none, x, x, 3, 0.1), ArgumentError);
  EXPECT_THROW(optimize_to_target(pipe, x, demo_image<float>(4, 4), 3, 0.1), ShapeError);
}

TEST(Optimize, ProjectionKeepsBox) {
  const auto x = demo_image<double>(8, 8);
  auto pipe = brightness_pipeline<double>(0.05, 0);
  const auto target = Tensor64::zeros(x.shape());
  optimize_to_target(pipe, x, target, 50, 5.0);
  EXPECT_GE(pipe.layers[0].learnable.at("brightness").item(), 0.0);
}

double l2(const Tensor32& a, const Tensor32& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.numel(); ++i) s += std::pow(a.data()[i] - b.data()[i], 2);
  return std::sqrt(s);
}

TEST(Export, TripletFilesAndOrdering) {
  const fs::path dir = fs::temp_directory_path() / "ddaug_triplet_test";
  fs::remove_all(dir);
  auto pipe = brightness_pipeline<float>(2.0, 0);
  const auto x = demo_image<float>(16, 20);
  const auto r = export_triplet(pipe, x, dir, 200, 0.05);
  const auto o = read_ppm<float>(r.original), a = read_ppm<float>(r.augmented), u = read_ppm<float>(r.updated);
  EXPECT_EQ(read_ppm<float>(r.panel).shape(), (Shape{1, 3, 16, 60}));
  EXPECT_LT(l2(u, o), l2(a, o));

  Pipeline<float> identity({aug::color_jitter<float>({1, 1}, {1, 1}, {1, 1}, {0, 0})}, 0);
  const auto r2 = export_triplet(identity, x, dir / "id");
  const auto o2 = read_ppm<float>(r2.original);
  EXPECT_EQ(read_ppm<float>(r2.augmented).to_vector(), o2.to_vector());
  EXPECT_EQ(read_ppm<float>(r2.updated).to_vector(), o2.to_vector());
  fs::remove_all(dir);
}

TEST(ImageIo, QuantizeAndRoundTrip) {
  EXPECT_EQ(quantize(1.0), 255);
  EXPECT_EQ(quantize(0.0), 0);
  EXPECT_EQ(quantize(1.7), 255);
  EXPECT_EQ(quantize(-0.2), 0);
  EXPECT_EQ(quantize(0.5), 128);
  const fs::path p = fs::temp_directory_path() / "ddaug_io_test.ppm";
  Tensor32 img({1, 3, 2, 3});
  for (std::size_t i = 0; i < img.numel(); ++i) img.mutable_data()[i] = static_cast<float>(i * 13 % 256) / 255.0f;
  write_ppm(p, img);
  EXPECT_EQ(read_ppm<float>(p).to_vector(), img.to_vector());
  fs::remove(p);
  EXPECT_THROW(write_ppm(fs::path("/nonexistent/dir/x.ppm"), img), IoError);
  EXPECT_THROW(read_ppm<float>("/nonexistent/x.ppm"), IoError);
}

}  // namespace
}  // namespace ddaug
