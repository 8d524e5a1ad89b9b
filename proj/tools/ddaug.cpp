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

#include <cstdio>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "ddaug/bench.hpp"
#include "ddaug/image_io.hpp"
#include "ddaug/optimizer.hpp"
#include "ddaug/serialize.hpp"

namespace {

int bench_command(const ddaug::BenchConfig& cfg) {
  const auto out = ddaug::resolve_output(cfg.out);
  const auto reports = ddaug::run_bench(cfg);
  ddaug::emit_csv(reports, out);
  for (const auto& r : reports)
    std::printf("size %zu: mean %.4f s/epoch (augmentation %.4f s), std %.4f s\n", r.image_size,
                r.mean_total, r.mean_aug, r.std_total);
  std::printf("wrote %s\n", out.string().c_str());
  return 0;
}

struct DemoOptions {
  std::string out_dir = "demo";
  std::string input;
  std::size_t size = 64;
  std::size_t steps = 200;
  double lr = 0.05;
  double init = 2.0;
  std::uint64_t seed = 0;
};

int demo_command(const DemoOptions& o) {
  auto pipe = ddaug::brightness_pipeline<float>(o.init, o.seed);
  const auto x = o.input.empty() ? ddaug::demo_image<float>(o.size, o.size) : ddaug::read_ppm<float>(o.input);
  const auto report = ddaug::export_triplet(pipe, x, ddaug::resolve_output(o.out_dir), o.steps, o.lr);
  const float brightness = pipe.layers[0].learnable.at("brightness").item();
  std::printf("brightness %.6f after %zu steps\n", brightness, o.steps);
  if (!report.losses.empty())
    std::printf("loss %.6g -> %.6g\n", report.losses.front(), report.losses.back());
  std::printf("wrote %s\n", report.panel.string().c_str());
  return 0;
}

struct AugmentOptions {
  std::string pipeline = "table1";
  std::uint64_t seed = 0;
  std::size_t batch_size = 8;
  std::size_t image_size = 32;
  std::size_t channels = 3;
  std::size_t batches = 2;
  std::size_t start_batch = 0;
  std::string save;
  std::string dump;
};

int augment_command(const AugmentOptions& o) {
  auto pipe = o.pipeline == "table1" ? ddaug::table1_pipeline<float>(o.channels, o.seed)
                                     : ddaug::load_pipeline_file<float>(o.pipeline);
  std::FILE* dump = nullptr;
  if (!o.dump.empty()) {
    const auto path = ddaug::resolve_output(o.dump);
    dump = std::fopen(path.string().c_str(), "wb");
    if (!dump) throw ddaug::IoError("cannot open " + path.string() + " for writing");
  }
  for (std::size_t b = o.start_batch; b < o.start_batch + o.batches; ++b) {
    const auto x = ddaug::synthetic_batch<float>(o.seed, b * o.batch_size, o.batch_size, o.channels,
                                                 o.image_size);
    const auto y = pipe.forward(x).output;
    if (dump && std::fwrite(y.data().data(), sizeof(float), y.numel(), dump) != y.numel()) {
      std::fclose(dump);
      throw ddaug::IoError("short write to " + o.dump);
    }
    std::printf("batch %zu %016llx\n", b,
                static_cast<unsigned long long>(ddaug::fnv1a(y.data().data(), y.numel() * sizeof(float))));
  }
  if (dump && std::fclose(dump) != 0) throw ddaug::IoError("cannot close " + o.dump);
  if (!o.save.empty()) ddaug::save_pipeline(pipe, ddaug::resolve_output(o.save));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Differentiable data augmentation engine"};
  app.require_subcommand(1);

  ddaug::BenchConfig bench;
  auto* b = app.add_subcommand("bench", "Throughput benchmark over synthetic data");
  b->add_option("--batch-size", bench.batch_size, "Samples per batch")->capture_default_str();
  b->add_option("--image-size", bench.image_sizes, "Square image size(s)")->capture_default_str();
  b->add_option("--channels", bench.channels)->capture_default_str();
  b->add_option("--num-samples", bench.num_samples)->capture_default_str();
  b->add_option("--epochs", bench.epochs, "Timed epochs")->capture_default_str();
  b->add_option("--pipeline", bench.pipeline, "'table1' or a pipeline document")->capture_default_str();
  b->add_option("--threads", bench.threads, "OpenMP threads (0 = default)")->capture_default_str();
  b->add_option("--dtype", bench.dtype)->check(CLI::IsMember({"f32", "f64"}))->capture_default_str();
  b->add_option("--seed", bench.seed)->capture_default_str();
  b->add_option("--out", bench.out, "CSV path")->capture_default_str();
  b->add_option("--micro-batch", bench.micro_batch, "Samples per pipeline call (0 = auto)")
      ->capture_default_str();
  b->add_option("--warmup", bench.warmup, "Untimed warm-up epochs")->capture_default_str();

  DemoOptions demo;
  auto* d = app.add_subcommand("demo", "Brightness recovery and original/augmented/updated export");
  d->add_option("--out-dir", demo.out_dir)->capture_default_str();
  d->add_option("--input", demo.input, "Binary PPM input (default: synthetic image)");
  d->add_option("--size", demo.size, "Synthetic image size")->capture_default_str();
  d->add_option("--steps", demo.steps)->capture_default_str();
  d->add_option("--lr", demo.lr)->capture_default_str();
  d->add_option("--init", demo.init, "Initial brightness")->capture_default_str();
  d->add_option("--seed", demo.seed)->capture_default_str();

  AugmentOptions augment;
  auto* a = app.add_subcommand("augment", "Run a pipeline on synthetic batches and print digests");
  a->add_option("--pipeline", augment.pipeline)->capture_default_str();
  a->add_option("--seed", augment.seed, "Data seed, also seeds the table1 preset")->capture_default_str();
  a->add_option("--batch-size", augment.batch_size)->capture_default_str();
  a->add_option("--image-size", augment.image_size)->capture_default_str();
  a->add_option("--channels", augment.channels)->capture_default_str();
  a->add_option("--batches", augment.batches)->capture_default_str();
  a->add_option("--start-batch", augment.start_batch, "Index of the first synthetic batch")->capture_default_str();
  a->add_option("--save", augment.save, "Write the pipeline state afterwards");
  a->add_option("--dump", augment.dump, "Write the raw float32 outputs of every batch");

  CLI11_PARSE(app, argc, argv);
  try {
    if (b->parsed()) return bench_command(bench);
    if (d->parsed()) return demo_command(demo);
    return augment_command(augment);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "ddaug: %s\n", e.what());
    return 2;
  }
}
