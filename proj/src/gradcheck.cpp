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

#include "ddaug/gradcheck.hpp"

#include <algorithm>
#include <cmath>

namespace ddaug {

double grad_check(const ScalarFn& f, const Tensor64& x, double eps) {
  Tensor64 leaf = x.detach();
  leaf.set_requires_grad(true);
  const Tensor64 y = f(leaf);
  if (y.numel() != 1) throw GraphError("grad_check needs a scalar-valued function");
  std::vector<double> analytic(leaf.numel(), 0.0);
  if (y.requires_grad()) {
    backward(y);
    if (leaf.has_grad()) analytic.assign(leaf.grad().begin(), leaf.grad().end());
  }

  NoGradGuard no_grad;
  double worst = 0.0;
  Tensor64 probe = x.detach();
  auto values = probe.mutable_data();
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double saved = values[i];
    values[i] = saved + eps;
    const double up = f(probe).item();
    values[i] = saved - eps;
    const double down = f(probe).item();
    values[i] = saved;
    const double numeric = (up - down) / (2.0 * eps);
    const double err = std::abs(analytic[i] - numeric) / std::max(1.0, std::abs(numeric));
    if (std::isnan(err)) return err;
    worst = std::max(worst, err);
  }
  return worst;
}

}  // namespace ddaug
