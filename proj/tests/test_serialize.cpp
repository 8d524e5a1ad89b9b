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
#include <algorithm>
#include <cstring>
#include <functional>
#include <filesystem>
#include <limits>

#include "ddaug/serialize.hpp"
#include "json.hpp"
#include "test_util.hpp"

namespace ddaug {
namespace {

using testing::bitwise_equal;
using testing::random_tensor;
using json = nlohmann::json;

Pipeline<float> sample_pipeline() {
  auto jitter = aug::color_jitter<float>(aug::jitter(0.2), aug::jitter(0.3), {0.7, 1.3}, {-0.1, 0.1}, 0.75);
  jitter.make_learnable("saturation", {1.0 / 3.0});
  auto blur = aug::motion_blur<float>(7, {0, 90}, {-1, 1}, 0.25);
  auto mix = aug::mixup<float>({0.2, 0.8});
  mix.same_on_batch = true;
  auto ch = aug::solarize<float>({0.0, 1.0});
  ch.specs[0] = ParamSpec{"threshold", Choice{{0.25, 0.5, 0.1}}};
  auto gate = aug::sharpness<float>({0.5, 1.5});
  gate.specs[0] = ParamSpec{"factor", Bernoulli{0.3}};
  auto fixed = aug::rotation<float>({0, 0});
  fixed.specs[0] = ParamSpec{"angle", Fixed{12.5}};
  Pipeline<float> pipe({jitter, blur, mix, ch, gate, fixed, aug::resized_crop<float>(6, 6)}, 1234567890123ULL);
  pipe.rng.counter = 42;
  return pipe;
}

TEST(HexFloat, LosslessRoundTrip) {
  for (double v : {0.0, -0.0, 1.0 / 3.0, 1e-310, 6.02214076e23, -std::numeric_limits<double>::max()}) {
    const double back = parse_hexfloat(hexfloat(v));
    EXPECT_EQ(std::memcmp(&v, &back, sizeof v), 0) << hexfloat(v);
  }
  EXPECT_THROW(parse_hexfloat("0x1.8p+1garbage"), FormatError);
  EXPECT_THROW(parse_hexfloat(""), FormatError);
}

TEST(Document, ByteIdenticalRoundTrip) {
  const std::string doc = save_pipeline(sample_pipeline());
  EXPECT_EQ(save_pipeline(load_pipeline<float>(doc)), doc);
  const auto j = json::parse(doc);
  EXPECT_EQ(j["format_version"], kFormatVersion);
  EXPECT_EQ(j["rng"]["algorithm"], "splitmix64");
  EXPECT_EQ(j["rng"]["seed"], 1234567890123ULL);
  EXPECT_EQ(j["rng"]["counter"], 42u);
  EXPECT_EQ(j["layers"].size(), 7u);
  EXPECT_EQ(j["layers"][0]["kind"], "ColorJitter");
}

TEST(Document, PreservesEverything) {
  const auto src = sample_pipeline();
  const auto back = load_pipeline<float>(save_pipeline(src));
  ASSERT_EQ(back.layers.size(), src.layers.size());
  EXPECT_EQ(back.rng, src.rng);
  for (std::size_t i = 0; i < src.layers.size(); ++i) {
    const auto &a = src.layers[i], &b = back.layers[i];
    EXPECT_EQ(a.kind, b.kind);
    EXPECT_EQ(a.p, b.p);
    EXPECT_EQ(a.same_on_batch, b.same_on_batch);
    EXPECT_EQ(a.static_config, b.static_config);
    ASSERT_EQ(a.specs.size(), b.specs.size());
    for (const auto& sa : a.specs) {
      const auto sb = std::find_if(b.specs.begin(), b.specs.end(), [&](const ParamSpec& s) { return s.name == sa.name; });
      ASSERT_NE(sb, b.specs.end()) << sa.name;
      EXPECT_EQ(sa.width, sb->width);
      EXPECT_EQ(sa.dist.index(), sb->dist.index());
    }
    for (const auto& [name, t] : a.learnable) {
      EXPECT_EQ(b.learnable.at(name).to_vector(), t.to_vector());
      EXPECT_TRUE(b.learnable.at(name).requires_grad());
    }
  }
}

TEST(Document, ResumesStreamMidEpoch) {
  const auto x = random_tensor<float>({4, 3, 8, 8}, 3);
  auto a = sample_pipeline();
  a.forward(x);
  auto b = load_pipeline<float>(save_pipeline(a));
  EXPECT_TRUE(bitwise_equal(a.forward(x).output, b.forward(x).output));

  const auto path = std::filesystem::temp_directory_path() / "ddaug_serialize_test.json";
  save_pipeline(a, path);
  auto c = load_pipeline_file<float>(path);
  EXPECT_TRUE(bitwise_equal(a.forward(x).output, c.forward(x).output));
  std::filesystem::remove(path);
}

std::string mutate(const std::function<void(json&)>& edit) {
  auto j = json::parse(save_pipeline(sample_pipeline()));
  edit(j);
  return j.dump(2);
}

void expect_format_error(const std::string& doc, const std::string& needle) {
  try {
    load_pipeline<float>(doc);
    FAIL() << "expected FormatError containing " << needle;
  } catch (const FormatError& e) {
    EXPECT_NE(std::string(e.what()).find(needle), std::string::npos) << e.what();
  }
}

TEST(Document, Errors) {
  expect_format_error(mutate([](json& j) { j["layers"][2]["kind"] = "Swirl"; }), "Swirl");
  expect_format_error(mutate([](json& j) { j["format_version"] = 2; }), "version");
  expect_format_error(mutate([](json& j) { j["rng"]["algorithm"] = "mt19937"; }), "mt19937");
  expect_format_error(mutate([](json& j) { j["extra"] = 1; }), "extra");
  expect_format_error(mutate([](json& j) { j["layers"][1]["colour"] = 1; }), "/layers/1/colour");
  expect_format_error(mutate([](json& j) { j["layers"][0]["p"] = 0.5; }), "/layers/0/p");
  expect_format_error("{ not json", "pipeline document");
  EXPECT_THROW(load_pipeline_file<float>("/nonexistent/dir/pipe.json"), IoError);
}

TEST(Document, DoublePrecisionPipelines) {
  auto n = aug::normalize<double>({0.1, 0.2, 0.3}, {0.4, 0.5, 0.6});
  n.make_learnable("mean", {0.123456789012345678, 0.2, 0.3});
  Pipeline<double> pipe({n}, 5);
  const std::string doc = save_pipeline(pipe);
  const auto back = load_pipeline<double>(doc);
  EXPECT_EQ(back.layers[0].learnable.at("mean").at(0), 0.123456789012345678);
  EXPECT_EQ(save_pipeline(back), doc);
}

}  // namespace
}  // namespace ddaug
