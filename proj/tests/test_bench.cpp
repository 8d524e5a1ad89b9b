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

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>

#include "ddaug/bench.hpp"
#include "test_util.hpp"

namespace ddaug {
namespace {

namespace fs = std::filesystem;

BenchConfig small_config() {
  BenchConfig c;
  c.batch_size = 16;
  c.image_sizes = {24};
  c.num_samples = 40;
  c.epochs = 2;
  c.warmup = 0;
  c.seed = 3;
  return c;
}

std::vector<std::string> read_lines(const fs::path& p) {
  std::ifstream in(p);
  std::vector<std::string> lines;
  for (std::string l; std::getline(in, l);) lines.push_back(l);
  return lines;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  for (std::string cell; std::getline(ss, cell, ',');) out.push_back(cell);
  return out;
}

int run(const std::string& args, std::string* output = nullptr) {
  const std::string cmd = std::string("\"") + DDAUG_CLI_PATH + "\" " + args + " 2>&1";
  std::FILE* pipe = ::popen(cmd.c_str(), "r");
  std::string text;
  char buf[1024];
  while (std::size_t n = std::fread(buf, 1, sizeof buf, pipe)) text.append(buf, n);
  const int status = ::pclose(pipe);
  if (output) *output = text;
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

TEST(Config, Validation) {
  auto c = small_config();
  EXPECT_NO_THROW(c.validate());
  c.batch_size = 0;
  EXPECT_THROW(c.validate(), ArgumentError);
  c = small_config();
  c.dtype = "f16";
  EXPECT_THROW(c.validate(), ArgumentError);
  c = small_config();
  c.batch_size = 100;
  EXPECT_THROW(c.validate(), ArgumentError);
  c = small_config();
  c.image_sizes.clear();
  EXPECT_THROW(c.validate(), ArgumentError);
}

TEST(Table1, PresetContents) {
  const auto pipe = table1_pipeline<float>(3, 0);
  ASSERT_EQ(pipe.layers.size(), 3u);
  EXPECT_EQ(pipe.layers[0].kind, LayerKind::affine);
  EXPECT_EQ(pipe.layers[1].kind, LayerKind::color_jitter);
  EXPECT_EQ(pipe.layers[2].kind, LayerKind::normalize);
  BenchConfig c;
  EXPECT_EQ(c.batch_size, 512u);
  EXPECT_EQ(c.num_samples, 2560u);
  EXPECT_EQ(c.image_sizes, (std::vector<std::size_t>{32, 224, 512}));
  EXPECT_EQ(c.pipeline, "table1");
}

TEST(Synthetic, DeterministicAndIndependentOfBatching) {
  const auto whole = synthetic_batch<float>(9, 0, 6, 3, 8);
  const auto tail = synthetic_batch<float>(9, 4, 2, 3, 8);
  EXPECT_TRUE(std::equal(tail.data().begin(), tail.data().end(), whole.data().begin() + 4 * 3 * 64));
  EXPECT_TRUE(testing::bitwise_equal(whole, synthetic_batch<float>(9, 0, 6, 3, 8)));
}

TEST(Report, ConsistencyAndDeterminism) {
  const auto r = run_bench_size(small_config(), 24);
  ASSERT_EQ(r.total_seconds.size(), 2u);
  EXPECT_EQ(r.batches_per_epoch, 2u);
  const double mean = std::accumulate(r.total_seconds.begin(), r.total_seconds.end(), 0.0) / 2.0;
  EXPECT_EQ(r.mean_total, mean);
  for (std::size_t e = 0; e < 2; ++e) {
    EXPECT_GE(r.aug_seconds[e], 0.0);
    EXPECT_LE(r.aug_seconds[e], r.total_seconds[e]);
  }
  EXPECT_EQ(r.first_batch_digest[0], r.first_batch_digest[1]);
  EXPECT_EQ(r.first_batch_digest, run_bench_size(small_config(), 24).first_batch_digest);

  auto one = small_config();
  one.epochs = 1;
  EXPECT_EQ(run_bench_size(one, 24).std_total, 0.0);
}

TEST(Report, DoublingSamplesRoughlyDoublesTime) {
  auto c = small_config();
  c.batch_size = 64;
  c.image_sizes = {64};
  c.num_samples = 256;
  c.epochs = 3;
  c.warmup = 1;
  const double base = run_bench_size(c, 64).mean_total;
  c.num_samples = 512;
  const double twice = run_bench_size(c, 64).mean_total;
  const double ratio = twice / base;
  EXPECT_GT(ratio, 2.0 / 1.5) << "ratio " << ratio;
  EXPECT_LT(ratio, 2.0 * 1.5) << "ratio " << ratio;
}

TEST(Csv, GoldenHeaderAndRoundTrip) {
  const fs::path p = fs::temp_directory_path() / "ddaug_bench_test.csv";
  const auto reports = run_bench(small_config());
  emit_csv(reports, p);
  const auto lines = read_lines(p);
  const auto golden = read_lines(fs::path(DDAUG_GOLDEN_DIR) / "bench_header_epochs2.csv");
  ASSERT_EQ(lines.size(), 2u);
  ASSERT_EQ(golden.size(), 1u);
  EXPECT_EQ(lines[0], golden[0]);
  const auto cols = split(lines[0]);
  const auto cells = split(lines[1]);
  ASSERT_EQ(cells.size(), cols.size());
  const auto& r = reports[0];
  auto cell = [&](const std::string& name) {
    return cells[std::find(cols.begin(), cols.end(), name) - cols.begin()];
  };
  EXPECT_EQ(std::stoul(cell("batch_size")), 16u);
  EXPECT_EQ(std::stoul(cell("num_samples")), 40u);
  EXPECT_NEAR(std::stod(cell("epoch1_total_s")), r.total_seconds[0], 1e-8 * r.total_seconds[0] + 1e-12);
  EXPECT_NEAR(std::stod(cell("mean_aug_s")), r.mean_aug, 1e-8 * r.mean_aug + 1e-12);
  EXPECT_EQ(std::stoull(cell("first_batch_digest"), nullptr, 16), r.first_batch_digest[0]);
  EXPECT_EQ(cell("digest_stable"), "1");
  fs::remove(p);
  EXPECT_THROW(emit_csv(reports, "/nonexistent/dir/out.csv"), IoError);
}

TEST(Cli, BenchWritesCsvHonoringOutputDir) {
  const fs::path dir = fs::temp_directory_path() / "ddaug_cli_test";
  fs::create_directories(dir);
  std::string out;
  ::setenv(kOutputDirEnv, dir.c_str(), 1);
  ASSERT_EQ(run("bench --batch-size 8 --image-size 16 --num-samples 16 --epochs 2 --warmup 0 --out rel.csv", &out), 0)
      << out;
  ::unsetenv(kOutputDirEnv);
  const auto lines = read_lines(dir / "rel.csv");
  ASSERT_EQ(lines.size(), 2u);
  EXPECT_EQ(lines[0], read_lines(fs::path(DDAUG_GOLDEN_DIR) / "bench_header_epochs2.csv")[0]);
  fs::remove_all(dir);
}

TEST(Cli, AugmentResumesFromSavedState) {
  const fs::path state = fs::temp_directory_path() / "ddaug_cli_resume.json";
  std::string whole, head, tail;
  ASSERT_EQ(run("augment --seed 77 --batches 3", &whole), 0) << whole;
  ASSERT_EQ(run("augment --seed 77 --batches 1 --save \"" + state.string() + "\"", &head), 0) << head;
  ASSERT_EQ(run("augment --seed 77 --start-batch 1 --batches 2 --pipeline \"" + state.string() + "\"", &tail), 0)
      << tail;
  EXPECT_EQ(head + tail, whole);
  fs::remove(state);
}

TEST(Cli, ConfigErrorsExitNonzeroWithMessage) {
  std::string out;
  EXPECT_NE(run("bench --batch-size 0 --out /tmp/ddaug_never.csv", &out), 0);
  EXPECT_NE(out.find("batch size"), std::string::npos) << out;
  EXPECT_NE(run("bench --dtype f16", &out), 0);
  EXPECT_NE(run("bench --image-size 8 --batch-size 4 --num-samples 4 --epochs 1 --out /nonexistent/dir/x.csv", &out),
            0);
  EXPECT_NE(out.find("ddaug:"), std::string::npos) << out;
  EXPECT_NE(run("bench --pipeline /nonexistent/pipe.json --image-size 8", &out), 0);
}

}  // namespace
}  // namespace ddaug
