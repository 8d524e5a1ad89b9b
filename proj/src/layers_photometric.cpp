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
#include <cmath>
#include <numeric>

#include "ddaug/ops.hpp"
#include "ddaug/photometric.hpp"
#include "layers_internal.hpp"

namespace ddaug::detail {

namespace {

template <typename T>
Tensor<T> per_sample(const AugLayer<T>& layer, const Selection& sel, const std::string& name) {
  auto it = layer.learnable.find(name);
  if (it != layer.learnable.end()) return it->second;
  std::vector<T> v(sel.size());
  for (std::size_t k = 0; k < sel.size(); ++k) v[k] = static_cast<T>(sel.get(name, k));
  const std::size_t count = v.size();
  return Tensor<T>({count}, std::move(v));
}

template <typename T>
Tensor<T> per_channel(const AugLayer<T>& layer, const std::string& name) {
  auto it = layer.learnable.find(name);
  if (it != layer.learnable.end()) return it->second;
  const auto& v = layer.config(name);
  return Tensor<T>({v.size()}, std::vector<T>(v.begin(), v.end()));
}

// A jitter component is skipped when it cannot change the image.
template <typename T>
bool active(const AugLayer<T>& layer, const std::string& name, double identity) {
  if (layer.learnable.count(name)) return true;
  const ParamSpec* s = layer.find_spec(name);
  if (const auto* u = std::get_if<Uniform>(&s->dist)) return !(u->lo == identity && u->hi == identity);
  if (const auto* f = std::get_if<Fixed>(&s->dist)) return f->value != identity;
  return true;
}

std::vector<std::size_t> argsort_keys(const AugParams& params) {
  std::vector<std::size_t> perm(params.n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  std::stable_sort(perm.begin(), perm.end(), [&](std::size_t a, std::size_t b) {
    return params.get("key", a) < params.get("key", b);
  });
  return perm;
}

}  // namespace

template <typename T>
Tensor<T> run_pixelwise(const AugLayer<T>& layer, const Tensor<T>& x, const Selection& sel) {
  switch (layer.kind) {
    case LayerKind::normalize:
      return normalize(x, per_channel(layer, "mean"), per_channel(layer, "std"));
    case LayerKind::denormalize:
      return denormalize(x, per_channel(layer, "mean"), per_channel(layer, "std"));
    case LayerKind::color_jitter: {
      Tensor<T> y = x;
      if (active(layer, "brightness", 1.0)) y = adjust_brightness(y, per_sample(layer, sel, "brightness"));
      if (active(layer, "contrast", 1.0)) y = adjust_contrast(y, per_sample(layer, sel, "contrast"));
      if (active(layer, "saturation", 1.0)) y = adjust_saturation(y, per_sample(layer, sel, "saturation"));
      if (active(layer, "hue", 0.0)) y = adjust_hue(y, per_sample(layer, sel, "hue"));
      return y;
    }
    case LayerKind::grayscale:
      return grayscale(x);
    case LayerKind::solarize: {
      std::vector<double> th(sel.size());
      for (std::size_t k = 0; k < sel.size(); ++k) th[k] = sel.get("threshold", k);
      return solarize(x, th);
    }
    case LayerKind::equalize:
      return equalize(x);
    case LayerKind::sharpness:
      return sharpness(x, per_sample(layer, sel, "factor"));
    case LayerKind::motion_blur: {
      std::vector<double> angles(sel.size()), dirs(sel.size());
      for (std::size_t k = 0; k < sel.size(); ++k) {
        angles[k] = sel.get("angle", k);
        dirs[k] = sel.get("direction", k);
      }
      return motion_blur(x, static_cast<std::size_t>(layer.config("kernel_size")[0]), angles, dirs);
    }
    case LayerKind::erasing: {
      if (x.rank() != 4) throw ShapeError("Erasing: expected an (N, C, H, W) batch");
      std::vector<Box> boxes(sel.size());
      for (std::size_t k = 0; k < sel.size(); ++k)
        boxes[k] = draw_box(x.dim(2), x.dim(3), sel, k, 1).value_or(Box{});
      return erase(x, boxes, static_cast<T>(layer.config("fill")[0]));
    }
    default:
      throw ArgumentError(std::string(kind_name(layer.kind)) + " is not a pixel-wise layer");
  }
}

template <typename T>
Tensor<T> run_mixing(const AugLayer<T>& layer, const Tensor<T>& x, AugParams& params) {
  if (x.rank() != 4) throw ShapeError(std::string(kind_name(layer.kind)) + ": expected (N, C, H, W)");
  const std::size_t n = params.n;
  const std::vector<std::size_t> perm = argsort_keys(params);
  MixResult<T> mixed;
  if (layer.kind == LayerKind::mixup) {
    std::vector<T> lam(n);
    for (std::size_t s = 0; s < n; ++s)
      lam[s] = params.apply_mask[s] ? static_cast<T>(params.get("lam", s)) : T(1);
    mixed = mixup(x, Tensor<T>({n}, std::move(lam)), perm);
  } else {
    const std::size_t h = x.dim(2), w = x.dim(3);
    std::vector<Box> boxes(n);
    for (std::size_t s = 0; s < n; ++s) {
      if (!params.apply_mask[s]) continue;
      const double side = std::sqrt(params.get("area", s));
      Box& b = boxes[s];
      b.w = std::min(w, static_cast<std::size_t>(std::lround(side * static_cast<double>(w))));
      b.h = std::min(h, static_cast<std::size_t>(std::lround(side * static_cast<double>(h))));
      b.x0 = std::min(static_cast<std::size_t>(params.get("center", s, 0) * (w - b.w + 1)), w - b.w);
      b.y0 = std::min(static_cast<std::size_t>(params.get("center", s, 1) * (h - b.h + 1)), h - b.h);
    }
    mixed = cutmix(x, boxes, perm);
  }
  params.values["lam_effective"] = ParamValues{1, mixed.lam};
  params.values["perm"] = ParamValues{1, std::vector<double>(perm.begin(), perm.end())};
  return mixed.output;
}

template Tensor<float> run_pixelwise<float>(const AugLayer<float>&, const Tensor<float>&, const Selection&);
template Tensor<double> run_pixelwise<double>(const AugLayer<double>&, const Tensor<double>&, const Selection&);
template Tensor<float> run_mixing<float>(const AugLayer<float>&, const Tensor<float>&, AugParams&);
template Tensor<double> run_mixing<double>(const AugLayer<double>&, const Tensor<double>&, AugParams&);

}  // namespace ddaug::detail
