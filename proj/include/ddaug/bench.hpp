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
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "ddaug/layers.hpp"

namespace ddaug {

inline constexpr const char* kStandinVersion = "standin-v1";
inline constexpr const char* kOutputDirEnv = "DDAUG_OUTPUT_DIR";

struct BenchConfig {
  std::size_t batch_size = 512;
  std::vector<std::size_t> image_sizes = {32, 224, 512};
  std::size_t channels = 3;
  std::size_t num_samples = 2560;
  std::size_t epochs = 3;
  std::string pipeline = "table1";  // preset name or pipeline document path
  int threads = 0;                  // 0 keeps the OpenMP default
  std::string dtype = "f32";
  std::uint64_t seed = 0;
  std::filesystem::path out = "bench.csv";
  std::size_t micro_batch = 0;  // 0 picks a size that keeps tensors near 64 MiB
  std::size_t warmup = 1;

  void validate() const;
};

struct BenchReport {
  BenchConfig config;
  std::size_t image_size = 0;
  std::size_t micro_batch = 0;
  std::size_t batches_per_epoch = 0;
  std::vector<double> total_seconds;  // augmentation + stand-in, per epoch
  std::vector<double> aug_seconds;    // augmentation only, per epoch
  std::vector<std::uint64_t> first_batch_digest;
  double mean_total = 0.0;
  double std_total = 0.0;
  double mean_aug = 0.0;
  double std_aug = 0.0;
};

/// Random Affine + ColorJitter + Normalize, the three operations of the
/// reference throughput experiment.
template <typename T>
Pipeline<T> table1_pipeline(std::size_t channels, std::uint64_t seed);

/// Fixed compute stand-in for a model forward pass: 3x3 Gaussian blur,
/// 3x3 Laplacian, mean of squares over space, total sum.
template <typename T>
Tensor<T> standin_forward(const Tensor<T>& x);

/// Samples [first, first + count) of the synthetic dataset; sample i is a
/// pure function of (seed, i).
template <typename T>
Tensor<T> synthetic_batch(std::uint64_t seed, std::size_t first, std::size_t count,
                          std::size_t channels, std::size_t size);

std::uint64_t fnv1a(const void* data, std::size_t bytes, std::uint64_t h = 0xcbf29ce484222325ULL);

BenchReport run_bench_size(const BenchConfig& cfg, std::size_t image_size);
std::vector<BenchReport> run_bench(const BenchConfig& cfg);

/// Output path after applying the DDAUG_OUTPUT_DIR override to relative paths.
std::filesystem::path resolve_output(const std::filesystem::path& out);

std::vector<std::string> csv_columns(std::size_t epochs);
void emit_csv(const std::vector<BenchReport>& reports, const std::filesystem::path& path);

}  // namespace ddaug
