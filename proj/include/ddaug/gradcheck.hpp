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

#include <functional>

#include "ddaug/tensor.hpp"

namespace ddaug {

using ScalarFn = std::function<Tensor64(const Tensor64&)>;

/// Largest |analytic - central difference| / max(1, |central difference|)
/// over the elements of x, for a scalar-valued f. Non-finite values propagate.
double grad_check(const ScalarFn& f, const Tensor64& x, double eps = 1e-4);

}  // namespace ddaug
