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

#include "ddaug/bench.hpp"

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>

#include "ddaug/ops.hpp"
#include "ddaug/photometric.hpp"
#include "ddaug/serialize.hpp"

namespace ddaug {

namespace {

constexpr std::size_t kTensorBudget = std::size_t{16} << 20;  // elements

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

void mean_std(const std::vector<double>& v, double& mean, double& stddev) {
  double sum = 0.0;
  for (double x : v) sum += x;
  mean = sum / static_cast<double>(v.size());
  double sq = 0.0;
  for (double x : v) sq += (x - mean) * (x - mean);
  stddev = std::sqrt(sq / static_cast<double>(v.size()));
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

std::string hex64(std::uint64_t v) {
  char buf[24];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

template <typename T>
Pipeline<T> load_bench_pipeline(const BenchConfig& cfg) {
  if (cfg.pipeline == "table1") return table1_pipeline<T>(cfg.channels, cfg.seed);
  Pipeline<T> pipe = load_pipeline_file<T>(cfg.pipeline);
  pipe.rng = RngState{cfg.seed, 0};
  return pipe;
}

template <typename T>
BenchReport run_typed(const BenchConfig& cfg, std::size_t size) {
  BenchReport r;
  r.config = cfg;
  r.image_size = size;
  r.batches_per_epoch = cfg.num_samples / cfg.batch_size;
  const std::size_t per_image = cfg.channels * size * size;
  r.micro_batch = cfg.micro_batch
                      ? std::min(cfg.micro_batch, cfg.batch_size)
                      : std::clamp<std::size_t>(kTensorBudget / per_image, 1, cfg.batch_size);

  Pipeline<T> pipe = load_bench_pipeline<T>(cfg);
  const RngState start = pipe.rng;
  NoGradGuard no_grad;
  volatile T sink = T(0);

  for (std::size_t e = 0; e < cfg.warmup + cfg.epochs; ++e) {
    const bool timed = e >= cfg.warmup;
    pipe.rng = start;
    double total = 0.0, aug = 0.0;
    std::uint64_t digest = 0xcbf29ce484222325ULL;
    for (std::size_t b = 0; b < r.batches_per_epoch; ++b) {
      for (std::size_t off = 0; off < cfg.batch_size; off += r.micro_batch) {
        const std::size_t count = std::min(r.micro_batch, cfg.batch_size - off);
        const Tensor<T> x =
            synthetic_batch<T>(cfg.seed, b * cfg.batch_size + off, count, cfg.channels, size);
        const auto t0 = Clock::now();
        const Tensor<T> y = pipe.forward(x).output;
        const double t_aug = seconds_since(t0);
        sink = sink + standin_forward(y).item();
        total += seconds_since(t0);
        aug += t_aug;
        if (b == 0) digest = fnv1a(y.data().data(), y.numel() * sizeof(T), digest);
      }
    }
    if (!timed) continue;
    r.total_seconds.push_back(total);
    r.aug_seconds.push_back(aug);
    r.first_batch_digest.push_back(digest);
  }
  mean_std(r.total_seconds, r.mean_total, r.std_total);
  mean_std(r.aug_seconds, r.mean_aug, r.std_aug);
  return r;
}

}  // namespace

void BenchConfig::validate() const {
  auto positive = [](std::size_t v, const char* what) {
    if (v == 0) throw ArgumentError(std::string(what) + " must be >= 1");
  };
  positive(batch_size, "batch size");
  positive(channels, "channels");
  positive(num_samples, "num samples");
  positive(epochs, "epochs");
  if (image_sizes.empty()) throw ArgumentError("at least one image size is required");
  for (std::size_t s : image_sizes) positive(s, "image size");
  if (batch_size > num_samples)
    throw ArgumentError("batch size " + std::to_string(batch_size) + " exceeds num samples " +
                        std::to_string(num_samples));
  if (threads < 0) throw ArgumentError("threads must be >= 0");
  if (dtype != "f32" && dtype != "f64") throw ArgumentError("dtype must be f32 or f64, got '" + dtype + "'");
  if (pipeline.empty()) throw ArgumentError("pipeline must be 'table1' or a document path");
}

template <typename T>
Pipeline<T> table1_pipeline(std::size_t channels, std::uint64_t seed) {
  const bool rgb = channels == 3;
  std::vector<AugLayer<T>> layers;
  layers.push_back(aug::affine<T>({-15.0, 15.0}, {-0.1, 0.1}, {0.9, 1.1}, {-5.0, 5.0}, 1.0));
  layers.push_back(aug::color_jitter<T>(aug::jitter(0.2), aug::jitter(0.2),
                                        rgb ? aug::jitter(0.2) : Range{1.0, 1.0},
                                        rgb ? Range{-0.1, 0.1} : Range{0.0, 0.0}, 1.0));
  layers.push_back(aug::normalize<T>(std::vector<double>(channels, 0.5), std::vector<double>(channels, 0.25)));
  return Pipeline<T>(std::move(layers), seed);
}

template <typename T>
Tensor<T> standin_forward(const Tensor<T>& x) {
  StaticKernel<T> gauss{3, 3, 1, {}}, laplace{3, 3, 1, {}};
  for (double v : {1.0, 2.0, 1.0, 2.0, 4.0, 2.0, 1.0, 2.0, 1.0}) gauss.values.push_back(static_cast<T>(v / 16.0));
  for (double v : {0.0, 1.0, 0.0, 1.0, -4.0, 1.0, 0.0, 1.0, 0.0}) laplace.values.push_back(static_cast<T>(v));
  const Tensor<T> edges = conv2d_fixed(conv2d_fixed(x, gauss), laplace);
  return sum(mean(edges * edges, {2, 3}));
}

template <typename T>
Tensor<T> synthetic_batch(std::uint64_t seed, std::size_t first, std::size_t count,
                          std::size_t channels, std::size_t size) {
  const std::size_t per = channels * size * size;
  std::vector<T> v(count * per);
  const RngState base{seed, 0};
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t s = 0; s < static_cast<std::ptrdiff_t>(count); ++s) {
    RngState rng = derive(base, first + s);
    for (std::size_t k = 0; k < per; ++k) v[s * per + k] = static_cast<T>(rng.next_uniform());
  }
  return Tensor<T>({count, channels, size, size}, std::move(v));
}

std::uint64_t fnv1a(const void* data, std::size_t bytes, std::uint64_t h) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < bytes; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ULL;
  }
  return h;
}

BenchReport run_bench_size(const BenchConfig& cfg, std::size_t image_size) {
  cfg.validate();
  if (cfg.threads > 0) omp_set_num_threads(cfg.threads);
  return cfg.dtype == "f64" ? run_typed<double>(cfg, image_size) : run_typed<float>(cfg, image_size);
}

std::vector<BenchReport> run_bench(const BenchConfig& cfg) {
  cfg.validate();
  std::vector<BenchReport> out;
  for (std::size_t s : cfg.image_sizes) out.push_back(run_bench_size(cfg, s));
  return out;
}

std::filesystem::path resolve_output(const std::filesystem::path& out) {
  const char* dir = std::getenv(kOutputDirEnv);
  if (!dir || !*dir || out.is_absolute()) return out;
  return std::filesystem::path(dir) / out;
}

std::vector<std::string> csv_columns(std::size_t epochs) {
  std::vector<std::string> c = {"batch_size", "image_size", "channels",   "num_samples", "epochs",
                                "pipeline",   "threads",    "dtype",      "seed",        "micro_batch",
                                "warmup",     "standin",    "batches_per_epoch"};
  for (std::size_t e = 1; e <= epochs; ++e) c.push_back("epoch" + std::to_string(e) + "_total_s");
  for (std::size_t e = 1; e <= epochs; ++e) c.push_back("epoch" + std::to_string(e) + "_aug_s");
  for (const char* s : {"mean_total_s", "std_total_s", "mean_aug_s", "std_aug_s", "first_batch_digest",
                        "digest_stable"})
    c.push_back(s);
  return c;
}

void emit_csv(const std::vector<BenchReport>& reports, const std::filesystem::path& path) {
  if (reports.empty()) throw ArgumentError("emit_csv: no reports");
  const std::size_t epochs = reports.front().total_seconds.size();
  for (const auto& r : reports)
    if (r.total_seconds.size() != epochs) throw ArgumentError("emit_csv: reports differ in epoch count");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");

  const auto cols = csv_columns(epochs);
  for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
  out << "\n";
  for (const auto& r : reports) {
    const BenchConfig& c = r.config;
    std::vector<std::string> row = {std::to_string(c.batch_size),
                                    std::to_string(r.image_size),
                                    std::to_string(c.channels),
                                    std::to_string(c.num_samples),
                                    std::to_string(c.epochs),
                                    csv_field(c.pipeline),
                                    std::to_string(c.threads > 0 ? c.threads : omp_get_max_threads()),
                                    c.dtype,
                                    std::to_string(c.seed),
                                    std::to_string(r.micro_batch),
                                    std::to_string(c.warmup),
                                    kStandinVersion,
                                    std::to_string(r.batches_per_epoch)};
    for (double v : r.total_seconds) row.push_back(num(v));
    for (double v : r.aug_seconds) row.push_back(num(v));
    for (double v : {r.mean_total, r.std_total, r.mean_aug, r.std_aug}) row.push_back(num(v));
    row.push_back(hex64(r.first_batch_digest.front()));
    const bool stable = std::all_of(r.first_batch_digest.begin(), r.first_batch_digest.end(),
                                    [&](std::uint64_t d) { return d == r.first_batch_digest.front(); });
    row.push_back(stable ? "1" : "0");
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
    out << "\n";
  }
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

#define DDAUG_INSTANTIATE(T)                                                                    \
  template Pipeline<T> table1_pipeline<T>(std::size_t, std::uint64_t);                          \
  template Tensor<T> standin_forward<T>(const Tensor<T>&);                                      \
  template Tensor<T> synthetic_batch<T>(std::uint64_t, std::size_t, std::size_t, std::size_t,   \
                                        std::size_t);

DDAUG_INSTANTIATE(float)
DDAUG_INSTANTIATE(double)
#undef DDAUG_INSTANTIATE

}  // namespace ddaug
