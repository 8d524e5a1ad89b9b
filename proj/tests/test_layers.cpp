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
#include "ddaug/layers.hpp"
#include "ddaug/ops.hpp"
#include "ddaug/photometric.hpp"
#include "test_util.hpp"

namespace ddaug {
namespace {

using testing::bitwise_equal;
using testing::max_abs_diff;
using testing::random_tensor;

template <typename T>
AugResult<T> run(const AugLayer<T>& layer, const Tensor<T>& x, std::uint64_t seed = 1) {
  RngState rng{seed, 0};
  return layer_forward(layer, x, rng);
}

TEST(Catalog, NamesRoundTripAndUnknownKind) {
  EXPECT_EQ(all_kinds().size(), 26u);
  for (LayerKind k : all_kinds()) EXPECT_EQ(kind_from_name(kind_name(k)), k);
  try {
    kind_from_name("Twirl");
    FAIL();
  } catch (const FormatError& e) {
    EXPECT_NE(std::string(e.what()).find("Twirl"), std::string::npos);
  }
  EXPECT_EQ(kind_dims(LayerKind::crop3d), 3u);
  EXPECT_TRUE(is_geometric(LayerKind::perspective));
  EXPECT_FALSE(is_geometric(LayerKind::erasing));
}

TEST(Layer, FlipTwiceAndZeroRotation) {
  const auto x = random_tensor<float>({2, 3, 6, 5}, 1);
  const auto flip = aug::horizontal_flip<float>(1.0);
  EXPECT_LT(max_abs_diff(run(flip, run(flip, x).output).output, x), 1e-6);
  EXPECT_LT(max_abs_diff(run(aug::rotation<float>({0, 0}), x).output, x), 1e-6);
}

TEST(Layer, ProbabilityZeroIsBitwiseIdentity) {
  const auto x = random_tensor<float>({3, 3, 6, 6}, 2);
  const auto r = run(aug::affine<float>({-30, 30}, {-0.1, 0.1}, {0.8, 1.2}, {-5, 5}, 0.0), x);
  EXPECT_TRUE(bitwise_equal(r.output, x));
  EXPECT_EQ(r.transform.tensor().to_vector(), TransformMatrix<float>::identity(3, 2).tensor().to_vector());
}

TEST(Layer, GatingLeavesMaskedSamplesUntouched) {
  const auto x = random_tensor<float>({16, 3, 6, 6}, 3);
  for (const auto& layer : {aug::color_jitter<float>(aug::jitter(0.5), aug::jitter(0.5), aug::jitter(0.5),
                                                     {-0.5, 0.5}, 0.5),
                            aug::rotation<float>({-45, 45}, 0.5), aug::perspective<float>(0.5, 0.5),
                            aug::erasing<float>({0.1, 0.3}, {0.5, 2.0}, 0.0, 0.5)}) {
    const auto r = run(layer, x, 4);
    const auto& mask = r.params.at(0).apply_mask;
    std::size_t on = 0;
    const std::size_t per = 3 * 36;
    for (std::size_t n = 0; n < 16; ++n) {
      const bool same = std::equal(r.output.data().begin() + n * per, r.output.data().begin() + (n + 1) * per,
                                   x.data().begin() + n * per);
      if (!mask[n]) EXPECT_TRUE(same) << kind_name(layer.kind) << " sample " << n;
      on += mask[n];
    }
    EXPECT_GT(on, 0u);
    EXPECT_LT(on, 16u);
    if (is_geometric(layer.kind))
      for (std::size_t n = 0; n < 16; ++n)
        if (!mask[n]) EXPECT_EQ(r.transform.host(n).m, Homogeneous::identity(2).m);
  }
}

TEST(Layer, LearnableOverridesSampled) {
  auto l = aug::color_jitter<float>(aug::jitter(0.9), {1, 1}, {1, 1}, {0, 0});
  l.make_learnable("brightness", {0.5});
  EXPECT_EQ(l.find_spec("brightness"), nullptr);
  const auto x = random_tensor<float>({4, 3, 5, 5}, 5);
  EXPECT_LT(max_abs_diff(run(l, x).output, adjust_brightness(x, Tensor32({1}, {0.5f}))), 1e-6);
  EXPECT_THROW(l.make_learnable("gamma", {1.0}), ArgumentError);
}

TEST(Layer, ValidationErrors) {
  auto l = aug::rotation<float>({-10, 10});
  l.p = 1.5;
  EXPECT_THROW(l.validate(), ArgumentError);
  EXPECT_THROW(aug::motion_blur<float>(4, {0, 0}, {0, 0}), ArgumentError);
  EXPECT_THROW(aug::normalize<float>({0.5}, {0.0}), ArgumentError);
  auto crop = aug::center_crop<float>(4, 4);
  crop.p = 0.5;
  EXPECT_THROW(crop.validate(), ArgumentError);
  auto extra = aug::grayscale<float>();
  extra.static_config["bogus"] = {1.0};
  EXPECT_THROW(extra.validate(), ArgumentError);
  EXPECT_THROW(run(aug::rotation<float>({0, 0}), random_tensor<float>({1, 1, 2, 3, 4}, 1)), ShapeError);
  EXPECT_THROW(run(aug::center_crop<float>(9, 9), random_tensor<float>({1, 1, 4, 4}, 1)), ShapeError);
}

TEST(Crop, CenterCropsAreExactBlocks) {
  const auto x = random_tensor<float>({2, 2, 4, 4}, 6);
  EXPECT_LT(max_abs_diff(run(aug::center_crop<float>(4, 4), x).output, x), 1e-6);
  const auto y = run(aug::center_crop<float>(2, 2), x).output;
  ASSERT_EQ(y.shape(), (Shape{2, 2, 2, 2}));
  for (std::size_t p = 0; p < 4; ++p)
    for (std::size_t i = 0; i < 2; ++i)
      for (std::size_t j = 0; j < 2; ++j)
        EXPECT_NEAR(y.data()[(p * 2 + i) * 2 + j], x.data()[(p * 4 + i + 1) * 4 + j + 1], 1e-6);

  const auto v = random_tensor<float>({1, 1, 4, 6, 6}, 7);
  const auto c = run(aug::center_crop3d<float>(2, 2, 4), v).output;
  ASSERT_EQ(c.shape(), (Shape{1, 1, 2, 2, 4}));
  EXPECT_NEAR(c.at(0, 0, 0, 0, 0), v.at(0, 0, 1, 2, 1), 1e-6);
  EXPECT_NEAR(c.at(0, 0, 1, 1, 3), v.at(0, 0, 2, 3, 4), 1e-6);
}

TEST(Crop, RandomCropPicksIntegerWindow) {
  const auto x = random_tensor<float>({8, 1, 7, 9}, 8);
  const auto r = run(aug::crop<float>(3, 4), x);
  for (std::size_t n = 0; n < 8; ++n) {
    bool found = false;
    for (std::size_t oy = 0; oy + 3 <= 7 && !found; ++oy)
      for (std::size_t ox = 0; ox + 4 <= 9 && !found; ++ox) {
        bool all = true;
        for (std::size_t i = 0; i < 3 && all; ++i)
          for (std::size_t j = 0; j < 4 && all; ++j)
            all = std::abs(r.output.at(n, 0, i, j) - x.at(n, 0, oy + i, ox + j)) < 1e-5;
        found = all;
      }
    EXPECT_TRUE(found) << "sample " << n;
  }
}

TEST(Crop, ResizedCropIdentityAndFallback) {
  const auto x = random_tensor<float>({3, 3, 8, 8}, 9);
  EXPECT_LT(max_abs_diff(run(aug::resized_crop<float>(8, 8, {1, 1}, {1, 1}), x).output, x), 1e-6);
  const auto y = run(aug::resized_crop<float>(5, 5, {2, 3}, {1, 1}), x).output;
  EXPECT_LT(max_abs_diff(y, run(aug::resized_crop<float>(5, 5, {1, 1}, {1, 1}), x).output), 1e-6);
}

TEST(Erasing, FullBoxAndGradientMask) {
  const auto x = random_tensor<double>({2, 3, 6, 6}, 10);
  const auto full = run(aug::erasing<double>({1, 1}, {1, 1}, 0.0, 1.0), x).output;
  for (double v : full.data()) EXPECT_EQ(v, 0.0);
  auto leaf = x.detach();
  leaf.set_requires_grad(true);
  const auto y = run(aug::erasing<double>({0.2, 0.4}, {0.5, 2.0}, 2.0, 1.0), leaf).output;
  backward(sum(y));
  std::size_t erased = 0;
  for (std::size_t i = 0; i < y.numel(); ++i) {
    const bool inside = y.data()[i] == 2.0;
    erased += inside;
    EXPECT_EQ(leaf.grad()[i], inside ? 0.0 : 1.0);
  }
  EXPECT_GT(erased, 0u);
}

TEST(Pipeline, ZeroProbabilityLayersAndRotationAggregate) {
  const auto x = random_tensor<float>({2, 3, 9, 9}, 11);
  Pipeline<float> off({aug::rotation<float>({-30, 30}, 0.0), aug::color_jitter<float>(aug::jitter(0.3), {1, 1},
                                                                                        {1, 1}, {0, 0}, 0.0)},
                      3);
  EXPECT_TRUE(bitwise_equal(off.forward(x).output, x));

  Pipeline<double> two({aug::rotation<double>({12, 12}), aug::rotation<double>({31, 31})}, 4);
  const auto agg = two.forward(random_tensor<double>({2, 1, 9, 9}, 12)).transform;
  RngState rng{0, 0};
  const auto single = layer_forward(aug::rotation<double>({43, 43}), random_tensor<double>({2, 1, 9, 9}, 12), rng);
  EXPECT_LT(max_abs_diff(agg.tensor(), single.transform.tensor()), 1e-5);
}

TEST(Pipeline, InterLayerShapeErrorNamesLayer) {
  Pipeline<float> pipe({aug::center_crop<float>(4, 4), aug::center_crop<float>(6, 6)}, 0);
  try {
    pipe.forward(random_tensor<float>({1, 1, 8, 8}, 1));
    FAIL();
  } catch (const ShapeError& e) {
    EXPECT_NE(std::string(e.what()).find("layer 1"), std::string::npos) << e.what();
  }
}

TEST(Pipeline, ToggledProbabilityKeepsOtherDrawsAligned) {
  const auto x = random_tensor<float>({6, 3, 8, 8}, 13);
  auto make = [](double p) {
    return Pipeline<float>({aug::affine<float>({-20, 20}, {-0.1, 0.1}, {0.9, 1.1}, {-5, 5}, p),
                            aug::color_jitter<float>(aug::jitter(0.3), aug::jitter(0.3), aug::jitter(0.3),
                                                     {-0.2, 0.2}, 0.5)},
                           21);
  };
  auto a = make(0.0), b = make(1.0);
  const auto ra = a.forward(x), rb = b.forward(x);
  EXPECT_EQ(ra.params[1].apply_mask, rb.params[1].apply_mask);
  for (const char* name : {"brightness", "contrast", "saturation", "hue"})
    EXPECT_EQ(ra.params[1].column(name), rb.params[1].column(name));
  EXPECT_EQ(ra.params[0].column("angle"), rb.params[0].column("angle"));
  EXPECT_EQ(a.rng, b.rng);
}

TEST(Pipeline, EndToEndDifferentiability) {
  auto jitter = aug::color_jitter<double>({1, 1}, {1, 1}, {1, 1}, {0, 0});
  for (const char* name : {"brightness", "contrast", "saturation"}) jitter.make_learnable(name, {1.05});
  jitter.make_learnable("hue", {0.1});
  auto sharp = aug::sharpness<double>({1, 1});
  sharp.make_learnable("factor", {0.9});
  auto rot = aug::rotation<double>({0, 0});
  rot.make_learnable("angle", {7.3});
  auto norm = aug::normalize<double>({0.5, 0.5, 0.5}, {0.25, 0.25, 0.25});
  norm.make_learnable("mean", {0.4, 0.5, 0.6});
  norm.make_learnable("std", {0.3, 0.2, 0.25});
  Pipeline<double> pipe({rot, jitter, sharp, norm}, 5);

  const auto x = random_tensor<double>({2, 3, 7, 7}, 14, 0.35, 0.65);
  const auto w = random_tensor<double>({2, 3, 7, 7}, 15, -1, 1);
  backward(sum(pipe.forward(x).output * w));
  const auto params = pipe.parameters();
  ASSERT_EQ(params.size(), 8u);
  for (const auto& p : params) EXPECT_TRUE(p.tensor.has_grad()) << p.name;

  for (const auto& p : params) {
    const auto f = [&](const Tensor64& v) {
      auto copy = pipe;
      for (auto& layer : copy.layers)
        for (auto& [name, t] : layer.learnable) t = t.detach();
      const auto dot = p.name.find('.');
      const std::size_t li = std::stoul(p.name.substr(0, dot));
      copy.layers[li].learnable[p.name.substr(dot + 1)] = v;
      copy.rng = RngState{5, 0};
      return sum(copy.forward(x).output * w);
    };
    EXPECT_LT(grad_check(f, p.tensor.detach()), 1e-3) << p.name;
  }
}

TEST(Pipeline, CloneForThreadIsIndependent) {
  auto jitter = aug::color_jitter<float>(aug::jitter(0.4), {1, 1}, {1, 1}, {0, 0});
  jitter.make_learnable("contrast", {1.2});
  Pipeline<float> pipe({jitter}, 8);
  auto c0 = pipe.clone_for_thread(0), c1 = pipe.clone_for_thread(1);
  EXPECT_NE(c0.rng, c1.rng);
  EXPECT_NE(c0.rng, pipe.rng);
  c0.layers[0].learnable.at("contrast").mutable_data()[0] = 3.0f;
  EXPECT_EQ(pipe.layers[0].learnable.at("contrast").item(), 1.2f);
  const auto x = random_tensor<float>({4, 3, 5, 5}, 16);
  EXPECT_FALSE(bitwise_equal(c1.forward(x).output, pipe.clone_for_thread(2).forward(x).output));
}

TEST(Pipeline, ReproducibleAndAdvancing) {
  const auto x = random_tensor<float>({4, 3, 8, 8}, 17);
  auto make = [] {
    return Pipeline<float>({aug::perspective<float>(0.4), aug::motion_blur<float>(5, {0, 180}, {-1, 1}, 0.5),
                            aug::cutmix<float>(), aug::solarize<float>({0.3, 0.9}, 0.5)},
                           77);
  };
  auto a = make(), b = make();
  const auto first = a.forward(x).output;
  EXPECT_TRUE(bitwise_equal(first, b.forward(x).output));
  EXPECT_FALSE(bitwise_equal(first, a.forward(x).output));
  EXPECT_EQ(a.rng.counter, 2u);
}

TEST(Geometric3d, AffineIdentityAndPerspectiveZero) {
  const auto v = random_tensor<float>({2, 1, 3, 4, 5}, 18);
  EXPECT_LT(max_abs_diff(run(aug::affine3d<float>({0, 0}, {0, 0}, {1, 1}), v).output, v), 1e-6);
  EXPECT_LT(max_abs_diff(run(aug::perspective3d<float>(0.0, 1.0), v).output, v), 1e-6);
  const auto r = run(aug::affine3d<float>({-20, 20}, {-0.1, 0.1}, {0.9, 1.1}), v);
  EXPECT_EQ(r.output.shape(), v.shape());
  EXPECT_EQ(r.transform.dims(), 3u);
}

}  // namespace
}  // namespace ddaug
