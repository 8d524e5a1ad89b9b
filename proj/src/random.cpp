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

#include "ddaug/random.hpp"

#include <algorithm>
#include <cmath>

#include "ddaug/errors.hpp"

namespace ddaug {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

std::size_t draws_per_value(const Distribution& d) { return std::holds_alternative<Fixed>(d) ? 0 : 1; }

}  // namespace

std::uint64_t splitmix64_mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t RngState::next_u64() {
  ++counter;
  return splitmix64_mix(seed + counter * kGolden);
}

double RngState::next_uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

RngState derive(const RngState& parent, std::uint64_t branch) {
  std::uint64_t h = splitmix64_mix(parent.seed ^ 0x6A09E667F3BCC909ULL);
  h = splitmix64_mix(h ^ (parent.counter + kGolden));
  h = splitmix64_mix(h ^ (branch * 0xD1B54A32D192ED03ULL + 1));
  return RngState{h, 0};
}

std::pair<RngState, RngState> split(const RngState& rng) { return {derive(rng, 0), derive(rng, 1)}; }

void validate(const ParamSpec& spec) {
  const std::string where = "parameter '" + spec.name + "': ";
  if (spec.name.empty()) throw ArgumentError("parameter spec without a name");
  if (spec.width == 0) throw ArgumentError(where + "width must be >= 1");
  if (const auto* u = std::get_if<Uniform>(&spec.dist)) {
    if (!std::isfinite(u->lo) || !std::isfinite(u->hi) || u->lo > u->hi)
      throw ArgumentError(where + "uniform needs finite lo <= hi, got [" + std::to_string(u->lo) +
                          ", " + std::to_string(u->hi) + "]");
  } else if (const auto* b = std::get_if<Bernoulli>(&spec.dist)) {
    if (!(b->p >= 0.0 && b->p <= 1.0)) throw ArgumentError(where + "bernoulli p must lie in [0, 1]");
  } else if (const auto* c = std::get_if<Choice>(&spec.dist)) {
    if (c->values.empty()) throw ArgumentError(where + "choice needs at least one value");
  } else if (const auto* f = std::get_if<Fixed>(&spec.dist)) {
    if (std::isnan(f->value)) throw ArgumentError(where + "fixed value is NaN");
  }
}

double AugParams::get(const std::string& name, std::size_t sample, std::size_t component) const {
  auto it = values.find(name);
  if (it == values.end()) throw ArgumentError("no sampled parameter named '" + name + "'");
  return it->second.values.at(sample * it->second.width + component);
}

std::vector<double> AugParams::column(const std::string& name, std::size_t component) const {
  std::vector<double> out(n);
  for (std::size_t s = 0; s < n; ++s) out[s] = get(name, s, component);
  return out;
}

std::size_t AugParams::applied_count() const {
  return static_cast<std::size_t>(std::count(apply_mask.begin(), apply_mask.end(), true));
}

std::uint64_t draw_count(const std::vector<ParamSpec>& specs, std::size_t n, bool same_on_batch) {
  const std::uint64_t rows = same_on_batch ? 1 : n;
  std::uint64_t total = rows;
  for (const auto& s : specs) total += rows * s.width * draws_per_value(s.dist);
  return total;
}

AugParams sample(const std::vector<ParamSpec>& specs, std::size_t n, double p, bool same_on_batch,
                 RngState& rng) {
  if (n == 0) throw ArgumentError("sample: batch size must be >= 1");
  if (!(p >= 0.0 && p <= 1.0)) throw ArgumentError("sample: probability must lie in [0, 1]");
  for (const auto& s : specs) validate(s);

  AugParams out;
  out.n = n;
  out.same_on_batch = same_on_batch;
  out.apply_mask.resize(n);
  const std::size_t rows = same_on_batch ? 1 : n;
  for (std::size_t r = 0; r < rows; ++r) out.apply_mask[r] = rng.next_uniform() < p;
  for (std::size_t r = rows; r < n; ++r) out.apply_mask[r] = out.apply_mask[0];

  for (const auto& spec : specs) {
    ParamValues pv;
    pv.width = spec.width;
    pv.values.resize(n * spec.width);
    for (std::size_t r = 0; r < rows; ++r)
      for (std::size_t k = 0; k < spec.width; ++k) {
        double v = 0.0;
        if (const auto* u = std::get_if<Uniform>(&spec.dist)) {
          const double d = rng.next_uniform();
          v = u->lo == u->hi ? u->lo : u->lo + (u->hi - u->lo) * d;
        } else if (const auto* b = std::get_if<Bernoulli>(&spec.dist)) {
          v = rng.next_uniform() < b->p ? 1.0 : 0.0;
        } else if (const auto* c = std::get_if<Choice>(&spec.dist)) {
          const auto idx = static_cast<std::size_t>(rng.next_uniform() * c->values.size());
          v = c->values[std::min(idx, c->values.size() - 1)];
        } else {
          v = std::get<Fixed>(spec.dist).value;
        }
        pv.values[r * spec.width + k] = v;
      }
    for (std::size_t r = rows; r < n; ++r)
      std::copy_n(pv.values.begin(), spec.width, pv.values.begin() + r * spec.width);
    out.values.emplace(spec.name, std::move(pv));
  }
  return out;
}

}  // namespace ddaug
