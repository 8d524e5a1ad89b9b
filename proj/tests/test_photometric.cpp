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

#include <cmath>
#include <numbers>

#include "ddaug/gradcheck.hpp"
#include "ddaug/photometric.hpp"
#include "test_util.hpp"

namespace ddaug {
namespace {

using testing::interior_diff;
using testing::max_abs_diff;
using testing::random_tensor;

Tensor64 one(double v) { return Tensor64({1}, {v}); }

Tensor64 pixel(double r, double g, double b) { return Tensor64({1, 3, 1, 1}, {r, g, b}); }

Tensor64 gray_image(std::uint64_t seed) {
  const auto g = random_tensor<double>({2, 1, 4, 4}, seed);
  return concat<double>({g, g, g}, 1);
}

TEST(Normalize, ExamplesAndErrors) {
  const auto x = random_tensor<double>({2, 3, 4, 4}, 1);
  EXPECT_EQ(normalize(x, one(0), one(1)).to_vector(), x.to_vector());
  const Tensor64 mean({3}, {0.4, 0.5, 0.6}), sd({3}, {0.2, 0.3, 0.25});
  EXPECT_LT(max_abs_diff(denormalize(normalize(x, mean, sd), mean, sd), x), 1e-6);
  EXPECT_DOUBLE_EQ(normalize(Tensor64({1, 1, 1, 1}, {0.5}), one(0.5), one(0.25)).item(), 0.0);
  EXPECT_DOUBLE_EQ(denormalize(Tensor64({1, 1, 1, 1}, {0.0}), one(0.5), one(0.25)).item(), 0.5);
  EXPECT_THROW(normalize(x, one(0), one(0)), ArgumentError);
  EXPECT_THROW(denormalize(x, one(0), one(-1)), ArgumentError);
}

TEST(Brightness, Examples) {
  const auto x = random_tensor<double>({2, 3, 4, 4}, 2);
  EXPECT_EQ(adjust_brightness(x, one(1)).to_vector(), x.to_vector());
  auto f = one(2.0);
  f.set_requires_grad(true);
  const auto y = adjust_brightness(Tensor64({1, 1, 1, 2}, {0.4, 0.8}), f);
  EXPECT_DOUBLE_EQ(y.at(0, 0, 0, 0), 0.8);
  EXPECT_DOUBLE_EQ(y.at(0, 0, 0, 1), 1.0);
  backward(sum(y));
  EXPECT_DOUBLE_EQ(f.grad()[0], 0.4);
  EXPECT_THROW(adjust_brightness(x, one(-0.1)), ArgumentError);
}

TEST(Contrast, Examples) {
  const auto x = random_tensor<double>({2, 3, 4, 4}, 3);
  EXPECT_LT(max_abs_diff(adjust_contrast(x, one(1)), x), 1e-12);
  const auto flat = adjust_contrast(x, one(0));
  double luma = 0.0;
  for (std::size_t k = 0; k < 16; ++k)
    for (std::size_t c = 0; c < 3; ++c) luma += kLumaWeights[c] * x.data()[c * 16 + k];
  luma /= 16.0;
  for (std::size_t k = 0; k < 48; ++k) EXPECT_NEAR(flat.data()[k], luma, 1e-12);
  const auto mid = random_tensor<double>({2, 3, 4, 4}, 4, 0.3, 0.7);
  EXPECT_LT(grad_check([&](const Tensor64& f) { return sum(adjust_contrast(mid, f) * mid); },
                       Tensor64({2}, {0.9, 1.15})),
            1e-3);
  EXPECT_THROW(adjust_contrast(x, one(-1)), ArgumentError);
}

TEST(Saturation, Examples) {
  const auto x = random_tensor<double>({2, 3, 4, 4}, 5);
  EXPECT_LT(max_abs_diff(adjust_saturation(x, one(1)), x), 1e-12);
  EXPECT_LT(max_abs_diff(adjust_saturation(x, one(0)), grayscale(x)), 1e-12);
  const auto g = gray_image(6);
  EXPECT_LT(max_abs_diff(adjust_saturation(g, one(1.7)), g), 1e-12);
  EXPECT_THROW(adjust_saturation(random_tensor<double>({1, 1, 2, 2}, 1), one(1)), ShapeError);
}

TEST(Hue, Examples) {
  const auto x = random_tensor<double>({2, 3, 4, 4}, 7, 0.2, 0.8);
  EXPECT_LT(max_abs_diff(adjust_hue(x, one(0)), x), 1e-6);
  EXPECT_LT(max_abs_diff(adjust_hue(x, one(2 * std::numbers::pi)), x), 1e-5);
  const auto g = gray_image(8);
  EXPECT_LT(max_abs_diff(adjust_hue(g, one(1.3)), g), 1e-6);
  EXPECT_LT(grad_check([&](const Tensor64& s) { return sum(adjust_hue(x, s) * x); }, Tensor64({2}, {0.3, -0.2})),
            1e-3);
  EXPECT_THROW(adjust_hue(random_tensor<double>({1, 1, 2, 2}, 1), one(0)), ShapeError);
}

TEST(Grayscale, Examples) {
  const auto white = grayscale(pixel(1, 1, 1));
  for (double v : white.data()) EXPECT_NEAR(v, 1.0, 1e-15);
  const auto r = grayscale(pixel(1, 0, 0));
  for (double v : r.data()) EXPECT_DOUBLE_EQ(v, 0.299);
  const auto g = gray_image(9);
  EXPECT_LT(max_abs_diff(grayscale(g), g), 1e-12);
  EXPECT_THROW(grayscale(random_tensor<double>({1, 2, 2, 2}, 1)), ShapeError);
}

TEST(Solarize, Examples) {
  const auto x = random_tensor<double>({2, 3, 4, 4}, 10, 0.0, 0.99);
  EXPECT_EQ(solarize(x, {1.0}).to_vector(), x.to_vector());
  EXPECT_DOUBLE_EQ(solarize(Tensor64({1, 1, 1, 1}, {0.6}), {0.5}).item(), 1.0 - 0.6);
  const auto inv = solarize(x, {0.0});
  for (std::size_t i = 0; i < x.numel(); ++i) EXPECT_DOUBLE_EQ(inv.data()[i], 1.0 - x.data()[i]);
  EXPECT_THROW(solarize(x, {1.5}), ArgumentError);

  auto v = Tensor64({1, 1, 1, 2}, {0.3, 0.7});
  v.set_requires_grad(true);
  backward(sum(solarize(v, {0.5})));
  EXPECT_EQ(v.grad()[0], 1.0);
  EXPECT_EQ(v.grad()[1], -1.0);
}

TEST(Equalize, ConstantTwoValueAndStraightThrough) {
  const auto c = Tensor64::full({1, 3, 4, 4}, 0.3);
  EXPECT_EQ(equalize(c).to_vector(), c.to_vector());

  std::vector<double> v(16);
  for (std::size_t k = 0; k < 16; ++k) v[k] = k % 2 ? 1.0 : 0.0;
  const auto two = equalize(Tensor64({1, 1, 4, 4}, v));
  for (std::size_t k = 0; k < 16; ++k) EXPECT_DOUBLE_EQ(two.data()[k], v[k]);

  auto x = random_tensor<double>({2, 3, 5, 5}, 11);
  x.set_requires_grad(true);
  backward(sum(equalize(x)));
  for (double g : x.grad()) EXPECT_EQ(g, 1.0);
}

// PIL-style LUT computed directly from its definition.
TEST(Equalize, MatchesDirectLut) {
  const auto x = random_tensor<double>({1, 1, 40, 40}, 12);
  std::vector<std::size_t> hist(256, 0);
  std::vector<int> bins(1600);
  for (std::size_t k = 0; k < 1600; ++k) {
    bins[k] = static_cast<int>(std::lround(x.data()[k] * 255.0));
    ++hist[bins[k]];
  }
  std::size_t last = 255;
  while (hist[last] == 0) --last;
  const std::size_t step = (1600 - hist[last]) / 255;
  const auto y = equalize(x);
  ASSERT_GT(step, 0u);
  std::vector<double> lut(256);
  std::size_t n = step / 2;
  for (int b = 0; b < 256; ++b) {
    lut[b] = static_cast<double>(std::min<std::size_t>(n / step, 255)) / 255.0;
    n += hist[b];
  }
  for (std::size_t k = 0; k < 1600; ++k) EXPECT_DOUBLE_EQ(y.data()[k], lut[bins[k]]);
}

TEST(Equalize, SpreadsNarrowHistogram) {
  std::vector<double> v(300 * 1);
  for (std::size_t k = 0; k < v.size(); ++k) v[k] = 0.4 + 0.2 * static_cast<double>(k % 30) / 29.0;
  const auto y = equalize(Tensor64({1, 1, 10, 30}, v));
  double lo = 1.0, hi = 0.0;
  for (double e : y.data()) {
    lo = std::min(lo, e);
    hi = std::max(hi, e);
  }
  EXPECT_LT(lo, 0.05);
  EXPECT_GT(hi, 0.9);
}

TEST(Sharpness, Examples) {
  const auto x = random_tensor<double>({2, 3, 5, 5}, 13);
  EXPECT_LT(max_abs_diff(sharpness(x, one(1)), x), 1e-6);
  const auto c = Tensor64::full({1, 3, 5, 5}, 0.42);
  EXPECT_LT(max_abs_diff(sharpness(c, one(2.5)), c), 1e-12);
  const auto mid = random_tensor<double>({2, 3, 5, 5}, 14, 0.4, 0.6);
  EXPECT_LT(grad_check([&](const Tensor64& f) { return sum(sharpness(mid, f) * mid); }, Tensor64({2}, {0.8, 1.3})),
            1e-3);
  const auto smooth = sharpness(x, one(0));
  EXPECT_EQ(smooth.at(0, 0, 0, 2), x.at(0, 0, 0, 2));
  double want = 0.0;
  for (int di = -1; di <= 1; ++di)
    for (int dj = -1; dj <= 1; ++dj) want += x.at(0, 1, 2 + di, 2 + dj) * ((di || dj) ? 1.0 : 5.0);
  EXPECT_NEAR(smooth.at(0, 1, 2, 2), want / 13.0, 1e-12);
  EXPECT_THROW(sharpness(x, one(-1)), ArgumentError);
}

TEST(MotionBlur, KernelAndConvolution) {
  const auto k = motion_blur_kernel(3, 0.0, 0.0);
  const std::vector<double> want{0, 0, 0, 1.0 / 3, 1.0 / 3, 1.0 / 3, 0, 0, 0};
  for (std::size_t i = 0; i < 9; ++i) EXPECT_NEAR(k[i], want[i], 1e-15);

  Tensor64 ramp({1, 1, 1, 5}, {0, 1, 2, 3, 4});
  const auto y = motion_blur(ramp, 3, {0.0}, {0.0});
  for (std::size_t j = 1; j < 4; ++j) EXPECT_NEAR(y.data()[j], static_cast<double>(j), 1e-12);
  EXPECT_NEAR(y.data()[0], 1.0 / 3.0, 1e-12);

  const auto flat = Tensor64::full({2, 3, 9, 9}, 0.6);
  EXPECT_LT(interior_diff(motion_blur(flat, 5, {33.0, 120.0}, {-0.5, 1.0}), flat, 2), 1e-12);

  const auto front = motion_blur_kernel(5, 90.0, 1.0);
  double total = 0.0;
  for (double v : front) total += v;
  EXPECT_NEAR(total, 1.0, 1e-12);
  EXPECT_GT(front[0 * 5 + 2], front[4 * 5 + 2]);
  EXPECT_THROW(motion_blur_kernel(4, 0, 0), ArgumentError);
  EXPECT_THROW(motion_blur_kernel(1, 0, 0), ArgumentError);
}

TEST(Mixup, Examples) {
  const auto x = random_tensor<double>({3, 2, 3, 3}, 15);
  const std::vector<std::size_t> perm{1, 2, 0};
  EXPECT_EQ(mixup(x, Tensor64::ones({3}), perm).output.to_vector(), x.to_vector());
  EXPECT_EQ(mixup(x, Tensor64::zeros({3}), perm).output.to_vector(), take(x, perm).to_vector());
  const auto r = mixup(x, Tensor64({3}, {0.2, 0.5, 0.9}), perm);
  EXPECT_EQ(r.lam, (std::vector<double>{0.2, 0.5, 0.9}));
  EXPECT_EQ(r.perm, perm);
  EXPECT_THROW(mixup(x, Tensor64::ones({3}), {0, 0, 1}), ArgumentError);
}

TEST(Cutmix, ExamplesAndGradient) {
  auto x = random_tensor<double>({2, 1, 32, 32}, 16);
  const auto r = cutmix(x, {Box{4, 4, 16, 16}, Box{0, 0, 0, 0}}, {1, 0});
  EXPECT_EQ(r.lam, (std::vector<double>{0.75, 1.0}));
  EXPECT_THROW(cutmix(x, {Box{20, 0, 16, 4}, Box{}}, {1, 0}), ArgumentError);

  x.set_requires_grad(true);
  backward(sum(cutmix(x, {Box{0, 0, 2, 1}, Box{0, 0, 0, 0}}, {1, 0}).output));
  EXPECT_EQ(x.grad()[0], 0.0);
  EXPECT_EQ(x.grad()[1024], 2.0);
  EXPECT_EQ(x.grad()[5], 1.0);
}

TEST(Erase, FillAndMask) {
  auto x = random_tensor<double>({1, 2, 4, 4}, 17);
  const auto full = erase(x, {Box{0, 0, 4, 4}}, 0.0);
  for (double v : full.data()) EXPECT_EQ(v, 0.0);
  x.set_requires_grad(true);
  backward(sum(erase(x, {Box{1, 1, 2, 2}}, 0.5)));
  EXPECT_EQ(x.grad()[0], 1.0);
  EXPECT_EQ(x.grad()[5], 0.0);
}

TEST(Range, PhotometricOutputsStayInUnitInterval) {
  const auto x = random_tensor<double>({4, 3, 6, 6}, 18);
  const Tensor64 f({4}, {0.0, 0.5, 1.7, 3.0}), h({4}, {-3.0, -1.0, 1.0, 3.0});
  const std::vector<Tensor64> outs{adjust_brightness(x, f), adjust_contrast(x, f), adjust_saturation(x, f),
                                   adjust_hue(x, h),        grayscale(x),          solarize(x, {0.1, 0.3, 0.6, 0.9}),
                                   equalize(x),             sharpness(x, f),       motion_blur(x, 5, {0, 45, 90, 10}, {0, 1, -1, 0.3})};
  for (const auto& y : outs)
    for (double v : y.data()) {
      EXPECT_GE(v, 0.0);
      EXPECT_LE(v, 1.0);
    }
}

}  // namespace
}  // namespace ddaug
