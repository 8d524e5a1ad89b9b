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

#include <algorithm>

#include "ddaug/kernels.hpp"

namespace ddaug::kernels {

namespace {

std::vector<std::size_t> contiguous_strides(const Shape& shape) {
  std::vector<std::size_t> s(shape.size(), 1);
  for (std::size_t i = shape.size(); i-- > 1;) s[i - 1] = s[i] * shape[i];
  return s;
}

}  // namespace

BroadcastPlan plan_broadcast(const Shape& a, const Shape& b) {
  BroadcastPlan plan;
  const std::size_t rank = std::max(a.size(), b.size());
  Shape pa(rank - a.size(), 1), pb(rank - b.size(), 1);
  pa.insert(pa.end(), a.begin(), a.end());
  pb.insert(pb.end(), b.begin(), b.end());
  plan.out.resize(rank);
  for (std::size_t i = 0; i < rank; ++i) {
    if (pa[i] == pb[i] || pb[i] == 1) {
      plan.out[i] = pa[i];
    } else if (pa[i] == 1) {
      plan.out[i] = pb[i];
    } else {
      throw ShapeError("shapes " + shape_str(a) + " and " + shape_str(b) +
                       " are not broadcast-compatible");
    }
  }
  plan.a_strides = contiguous_strides(pa);
  plan.b_strides = contiguous_strides(pb);
  for (std::size_t i = 0; i < rank; ++i) {
    if (pa[i] == 1) plan.a_strides[i] = 0;
    if (pb[i] == 1) plan.b_strides[i] = 0;
  }
  plan.same_shape = (a == b);
  return plan;
}

template <typename T>
void sum_axes(const T* in, const Shape& shape, const std::vector<bool>& reduce, T* out) {
  const std::size_t rank = shape.size();
  const auto strides = contiguous_strides(shape);
  Shape kept_extents, red_extents;
  std::vector<std::size_t> kept_strides, red_strides;
  for (std::size_t i = 0; i < rank; ++i) {
    if (reduce[i]) {
      red_extents.push_back(shape[i]);
      red_strides.push_back(strides[i]);
    } else {
      kept_extents.push_back(shape[i]);
      kept_strides.push_back(strides[i]);
    }
  }
  const std::size_t n_out = shape_numel(kept_extents);
  const std::size_t n_red = shape_numel(red_extents);

#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t o = 0; o < static_cast<std::ptrdiff_t>(n_out); ++o) {
    std::size_t rem = static_cast<std::size_t>(o), base = 0;
    for (std::size_t k = kept_extents.size(); k-- > 0;) {
      base += (rem % kept_extents[k]) * kept_strides[k];
      rem /= kept_extents[k];
    }
    double acc = 0.0;
    for (std::size_t r = 0; r < n_red; ++r) {
      std::size_t rr = r, off = base;
      for (std::size_t k = red_extents.size(); k-- > 0;) {
        off += (rr % red_extents[k]) * red_strides[k];
        rr /= red_extents[k];
      }
      acc += static_cast<double>(in[off]);
    }
    out[o] = static_cast<T>(acc);
  }
}

template void sum_axes<float>(const float*, const Shape&, const std::vector<bool>&, float*);
template void sum_axes<double>(const double*, const Shape&, const std::vector<bool>&, double*);

}  // namespace ddaug::kernels
