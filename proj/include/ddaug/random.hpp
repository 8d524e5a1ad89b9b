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
#include <map>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace ddaug {

/// Counter-based splitmix64 stream. Draw k (1-based) of a stream is
/// mix(seed + k * golden), so (seed, counter) fully determines the future.
struct RngState {
  static constexpr const char* kAlgorithm = "splitmix64";

  std::uint64_t seed = 0;
  std::uint64_t counter = 0;

  std::uint64_t next_u64();
  /// Uniform in [0, 1) with 53 random bits.
  double next_uniform();

  friend bool operator==(const RngState&, const RngState&) = default;
};

std::uint64_t splitmix64_mix(std::uint64_t z);

/// Child stream keyed by the parent's position and a branch index. The
/// parent is not advanced.
RngState derive(const RngState& parent, std::uint64_t branch);

/// derive(rng, 0) and derive(rng, 1).
std::pair<RngState, RngState> split(const RngState& rng);

struct Uniform {
  double lo = 0.0;
  double hi = 1.0;
};
struct Bernoulli {
  double p = 0.5;
};
struct Choice {
  std::vector<double> values;
};
struct Fixed {
  double value = 0.0;
};

using Distribution = std::variant<Uniform, Bernoulli, Choice, Fixed>;

struct ParamSpec {
  std::string name;
  Distribution dist;
  std::size_t width = 1;  // components per sample
};

void validate(const ParamSpec& spec);

struct ParamValues {
  std::size_t width = 1;
  std::vector<double> values;  // n * width, sample-major
};

struct AugParams {
  std::size_t n = 0;
  std::map<std::string, ParamValues> values;
  std::vector<bool> apply_mask;
  bool same_on_batch = false;

  bool has(const std::string& name) const { return values.count(name) != 0; }
  double get(const std::string& name, std::size_t sample, std::size_t component = 0) const;
  std::vector<double> column(const std::string& name, std::size_t component = 0) const;
  std::size_t applied_count() const;
};

/// Number of draws sample() consumes; independent of the mask outcome.
std::uint64_t draw_count(const std::vector<ParamSpec>& specs, std::size_t n, bool same_on_batch);

/// Draws the mask first (one draw per sample, or one in total when
/// same_on_batch), then each spec in order, sample by sample, component by
/// component. Fixed specs consume no draws.
AugParams sample(const std::vector<ParamSpec>& specs, std::size_t n, double p, bool same_on_batch,
                 RngState& rng);

}  // namespace ddaug
