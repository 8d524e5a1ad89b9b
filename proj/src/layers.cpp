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

#include "ddaug/layers.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include "ddaug/ops.hpp"
#include "layers_internal.hpp"

namespace ddaug {

namespace {

struct KindInfo {
  LayerKind kind;
  const char* name;
  std::size_t dims;
  bool geometric;
};

const KindInfo kKinds[] = {
    {LayerKind::normalize, "Normalize", 2, false},
    {LayerKind::denormalize, "Denormalize", 2, false},
    {LayerKind::color_jitter, "ColorJitter", 2, false},
    {LayerKind::grayscale, "Grayscale", 2, false},
    {LayerKind::solarize, "Solarize", 2, false},
    {LayerKind::equalize, "Equalize", 2, false},
    {LayerKind::sharpness, "Sharpness", 2, false},
    {LayerKind::motion_blur, "MotionBlur", 2, false},
    {LayerKind::mixup, "MixUp", 2, false},
    {LayerKind::cutmix, "CutMix", 2, false},
    {LayerKind::horizontal_flip, "HorizontalFlip", 2, true},
    {LayerKind::vertical_flip, "VerticalFlip", 2, true},
    {LayerKind::rotation, "Rotation", 2, true},
    {LayerKind::affine, "Affine", 2, true},
    {LayerKind::perspective, "Perspective", 2, true},
    {LayerKind::center_crop, "CenterCrop", 2, true},
    {LayerKind::crop, "Crop", 2, true},
    {LayerKind::resized_crop, "ResizedCrop", 2, true},
    {LayerKind::erasing, "Erasing", 2, false},
    {LayerKind::horizontal_flip3d, "HorizontalFlip3D", 3, true},
    {LayerKind::vertical_flip3d, "VerticalFlip3D", 3, true},
    {LayerKind::depthical_flip3d, "DepthicalFlip3D", 3, true},
    {LayerKind::center_crop3d, "CenterCrop3D", 3, true},
    {LayerKind::crop3d, "Crop3D", 3, true},
    {LayerKind::affine3d, "Affine3D", 3, true},
    {LayerKind::perspective3d, "Perspective3D", 3, true},
};

const KindInfo& info(LayerKind kind) {
  for (const auto& k : kKinds)
    if (k.kind == kind) return k;
  throw ArgumentError("unknown layer kind");
}

// A parameter drawn from a spec (or replaced by a learnable), or a static
// configuration entry. width 0 accepts any non-empty length.
struct Requirement {
  const char* name;
  bool is_static;
  std::size_t width;
};

std::vector<Requirement> requirements(LayerKind kind) {
  switch (kind) {
    case LayerKind::normalize:
    case LayerKind::denormalize:
      return {{"mean", true, 0}, {"std", true, 0}};
    case LayerKind::color_jitter:
      return {{"brightness", false, 1}, {"contrast", false, 1}, {"saturation", false, 1}, {"hue", false, 1}};
    case LayerKind::solarize:
      return {{"threshold", false, 1}};
    case LayerKind::sharpness:
      return {{"factor", false, 1}};
    case LayerKind::motion_blur:
      return {{"kernel_size", true, 1}, {"angle", false, 1}, {"direction", false, 1}};
    case LayerKind::mixup:
      return {{"lam", false, 1}, {"key", false, 1}};
    case LayerKind::cutmix:
      return {{"area", false, 1}, {"center", false, 2}, {"key", false, 1}};
    case LayerKind::rotation:
      return {{"angle", false, 1}};
    case LayerKind::affine:
      return {{"angle", false, 1}, {"translate", false, 2}, {"scale", false, 1}, {"shear", false, 2}};
    case LayerKind::perspective:
      return {{"offsets", false, 8}};
    case LayerKind::center_crop:
      return {{"size", true, 2}};
    case LayerKind::crop:
      return {{"size", true, 2}, {"padding", true, 1}, {"offset", false, 2}};
    case LayerKind::resized_crop:
      return {{"size", true, 2},
              {"scale", false, detail::kBoxAttempts},
              {"log_ratio", false, detail::kBoxAttempts},
              {"position", false, 2 * detail::kBoxAttempts}};
    case LayerKind::erasing:
      return {{"fill", true, 1},
              {"scale", false, detail::kBoxAttempts},
              {"log_ratio", false, detail::kBoxAttempts},
              {"position", false, 2 * detail::kBoxAttempts}};
    case LayerKind::center_crop3d:
      return {{"size", true, 3}};
    case LayerKind::crop3d:
      return {{"size", true, 3}, {"padding", true, 1}, {"offset", false, 3}};
    case LayerKind::affine3d:
      return {{"angle", false, 3}, {"translate", false, 3}, {"scale", false, 1}};
    case LayerKind::perspective3d:
      return {{"offsets", false, 24}};
    default:
      return {};
  }
}

bool changes_size(LayerKind kind) {
  return kind == LayerKind::center_crop || kind == LayerKind::crop ||
         kind == LayerKind::resized_crop || kind == LayerKind::center_crop3d ||
         kind == LayerKind::crop3d;
}

bool is_mixing(LayerKind kind) { return kind == LayerKind::mixup || kind == LayerKind::cutmix; }

ParamSpec uniform(const char* name, Range r, std::size_t width = 1) {
  return ParamSpec{name, Uniform{r.lo, r.hi}, width};
}

double as_size(std::size_t v) { return static_cast<double>(v); }

template <typename T>
AugLayer<T> make(LayerKind kind, double p) {
  AugLayer<T> l;
  l.kind = kind;
  l.dims = info(kind).dims;
  l.p = p;
  return l;
}

template <typename T>
AugLayer<T> checked(AugLayer<T> l) {
  l.validate();
  return l;
}

}  // namespace

const char* kind_name(LayerKind kind) { return info(kind).name; }

LayerKind kind_from_name(const std::string& name) {
  for (const auto& k : kKinds)
    if (name == k.name) return k.kind;
  throw FormatError("unknown layer kind '" + name + "'");
}

const std::vector<LayerKind>& all_kinds() {
  static const std::vector<LayerKind> kinds = [] {
    std::vector<LayerKind> v;
    for (const auto& k : kKinds) v.push_back(k.kind);
    return v;
  }();
  return kinds;
}

bool is_geometric(LayerKind kind) { return info(kind).geometric; }

std::size_t kind_dims(LayerKind kind) { return info(kind).dims; }

std::vector<std::string> learnable_names(LayerKind kind) {
  switch (kind) {
    case LayerKind::normalize:
    case LayerKind::denormalize:
      return {"mean", "std"};
    case LayerKind::color_jitter:
      return {"brightness", "contrast", "saturation", "hue"};
    case LayerKind::sharpness:
      return {"factor"};
    case LayerKind::rotation:
      return {"angle"};
    default:
      return {};
  }
}

ValidityBox validity_box(LayerKind kind, const std::string& name) {
  if (name == "std") return {1e-6, std::numeric_limits<double>::infinity()};
  if (name == "hue") return {-std::numbers::pi, std::numbers::pi};
  if (name == "brightness" || name == "contrast" || name == "saturation" ||
      (kind == LayerKind::sharpness && name == "factor"))
    return {0.0, std::numeric_limits<double>::infinity()};
  return {};
}

template <typename T>
void AugLayer<T>::make_learnable(const std::string& name, const std::vector<double>& init) {
  const auto names = learnable_names(kind);
  if (std::find(names.begin(), names.end(), name) == names.end())
    throw ArgumentError(std::string(kind_name(kind)) + " has no learnable parameter '" + name + "'");
  const bool per_channel = name == "mean" || name == "std";
  if (init.empty() || (!per_channel && init.size() != 1))
    throw ArgumentError("learnable '" + name + "' needs " + (per_channel ? "1 or C" : "exactly 1") +
                        " initial value(s)");
  std::erase_if(specs, [&](const ParamSpec& s) { return s.name == name; });
  static_config.erase(name);
  std::vector<T> values(init.begin(), init.end());
  const std::size_t count = values.size();
  Tensor<T> t({count}, std::move(values));
  t.set_requires_grad(true);
  learnable[name] = std::move(t);
}

template <typename T>
const ParamSpec* AugLayer<T>::find_spec(const std::string& name) const {
  for (const auto& s : specs)
    if (s.name == name) return &s;
  return nullptr;
}

template <typename T>
const std::vector<double>& AugLayer<T>::config(const std::string& name) const {
  auto it = static_config.find(name);
  if (it == static_config.end())
    throw ArgumentError(std::string(kind_name(kind)) + ": missing static entry '" + name + "'");
  return it->second;
}

template <typename T>
void AugLayer<T>::validate() const {
  const std::string who = kind_name(kind);
  if (dims != kind_dims(kind))
    throw ArgumentError(who + ": dims must be " + std::to_string(kind_dims(kind)));
  if (!(p >= 0.0 && p <= 1.0)) throw ArgumentError(who + ": p must lie in [0, 1]");
  if (changes_size(kind) && p != 0.0 && p != 1.0)
    throw ArgumentError(who + ": size-changing layers accept p = 0 or p = 1 only");

  std::set<std::string> seen;
  auto claim = [&](const std::string& name) {
    if (!seen.insert(name).second)
      throw ArgumentError(who + ": parameter '" + name + "' is defined more than once");
  };
  for (const auto& s : specs) {
    ddaug::validate(s);
    claim(s.name);
  }
  const auto allowed = learnable_names(kind);
  for (const auto& [name, t] : learnable) {
    claim(name);
    if (std::find(allowed.begin(), allowed.end(), name) == allowed.end())
      throw ArgumentError(who + " has no learnable parameter '" + name + "'");
    if (!t.defined() || t.rank() != 1 || t.numel() == 0)
      throw ArgumentError(who + ": learnable '" + name + "' must be a non-empty vector");
  }
  for (const auto& [name, v] : static_config) claim(name);

  for (const Requirement& r : requirements(kind)) {
    if (learnable.count(r.name)) continue;
    if (r.is_static) {
      const auto& v = config(r.name);
      if (v.empty() || (r.width != 0 && v.size() != r.width))
        throw ArgumentError(who + ": static entry '" + r.name + "' has " + std::to_string(v.size()) +
                            " values");
      continue;
    }
    const ParamSpec* s = find_spec(r.name);
    if (!s) throw ArgumentError(who + ": missing parameter spec '" + r.name + "'");
    if (s->width != r.width)
      throw ArgumentError(who + ": spec '" + r.name + "' must have width " + std::to_string(r.width));
  }
  for (const auto& name : seen) {
    bool known = false;
    for (const Requirement& r : requirements(kind)) known = known || name == r.name;
    if (!known) throw ArgumentError(who + ": unexpected parameter '" + name + "'");
  }

  if (kind == LayerKind::normalize || kind == LayerKind::denormalize) {
    if (!learnable.count("std"))
      for (double s : config("std"))
        if (!(s > 0.0)) throw ArgumentError(who + ": std must be > 0");
  }
  if (kind == LayerKind::motion_blur) {
    const double k = config("kernel_size")[0];
    if (!(k >= 3.0) || std::fmod(k, 2.0) != 1.0)
      throw ArgumentError(who + ": kernel_size must be odd and >= 3");
  }
  if (static_config.count("size"))
    for (double v : config("size"))
      if (!(v >= 1.0) || v != std::floor(v)) throw ArgumentError(who + ": sizes must be integers >= 1");
  if (static_config.count("padding")) {
    const double v = config("padding")[0];
    if (!(v >= 0.0) || v != std::floor(v)) throw ArgumentError(who + ": padding must be an integer >= 0");
  }
}

namespace detail {

std::optional<Box> draw_box(std::size_t height, std::size_t width, const Selection& sel,
                            std::size_t k, std::size_t min_side) {
  const double area = static_cast<double>(height) * static_cast<double>(width);
  for (std::size_t a = 0; a < kBoxAttempts; ++a) {
    const double target = sel.get("scale", k, a) * area;
    const double ratio = std::exp(sel.get("log_ratio", k, a));
    const double bw = std::round(std::sqrt(target * ratio));
    const double bh = std::round(std::sqrt(target / ratio));
    if (!(bw >= static_cast<double>(min_side) && bh >= static_cast<double>(min_side) &&
          bw <= static_cast<double>(width) && bh <= static_cast<double>(height)))
      continue;
    Box b;
    b.w = static_cast<std::size_t>(bw);
    b.h = static_cast<std::size_t>(bh);
    b.x0 = std::min(static_cast<std::size_t>(sel.get("position", k, 2 * a) * (width - b.w + 1)), width - b.w);
    b.y0 = std::min(static_cast<std::size_t>(sel.get("position", k, 2 * a + 1) * (height - b.h + 1)),
                    height - b.h);
    return b;
  }
  return std::nullopt;
}

}  // namespace detail

template <typename T>
AugResult<T> layer_forward(const AugLayer<T>& layer, const Tensor<T>& x, RngState& rng) {
  layer.validate();
  const std::string who = kind_name(layer.kind);
  if (!x.defined() || x.rank() != layer.dims + 2)
    throw ShapeError(who + ": expected a rank-" + std::to_string(layer.dims + 2) + " batch, got " +
                     (x.defined() ? shape_str(x.shape()) : std::string("undefined")));
  const std::size_t n = x.dim(0);
  if (n == 0) throw ShapeError(who + ": empty batch");

  // Specs are drawn in the kind's canonical order so that storage order
  // never changes the stream.
  std::vector<ParamSpec> ordered;
  for (const Requirement& req : requirements(layer.kind))
    if (const ParamSpec* s = layer.find_spec(req.name)) ordered.push_back(*s);

  AugResult<T> r;
  AugParams params = sample(ordered, n, layer.p, layer.same_on_batch, rng);
  r.transform = TransformMatrix<T>::identity(n, layer.dims);

  std::vector<std::size_t> idx;
  for (std::size_t s = 0; s < n; ++s)
    if (params.apply_mask[s]) idx.push_back(s);

  if (idx.empty()) {
    r.output = x;
  } else if (is_mixing(layer.kind)) {
    r.output = detail::run_mixing(layer, x, params);
  } else {
    const bool all = idx.size() == n;
    const Tensor<T> sub = all ? x : take(x, idx);
    const detail::Selection sel{params, idx};
    if (is_geometric(layer.kind)) {
      auto g = detail::run_geometric(layer, sub, sel);
      r.output = all ? g.output : put_rows(x, idx, g.output);
      r.transform = TransformMatrix<T>(all ? g.mats : put_rows(r.transform.tensor(), idx, g.mats));
    } else {
      const Tensor<T> out = detail::run_pixelwise(layer, sub, sel);
      r.output = all ? out : put_rows(x, idx, out);
    }
  }
  r.params.push_back(std::move(params));
  return r;
}

template <typename T>
Pipeline<T>::Pipeline(std::vector<AugLayer<T>> l, std::uint64_t seed)
    : layers(std::move(l)), rng{seed, 0} {
  validate();
}

template <typename T>
std::size_t Pipeline<T>::dims() const {
  return layers.empty() ? 2 : layers.front().dims;
}

template <typename T>
void Pipeline<T>::validate() const {
  if (layers.empty()) throw ArgumentError("pipeline has no layers");
  for (std::size_t i = 0; i < layers.size(); ++i) {
    layers[i].validate();
    if (layers[i].dims != layers[0].dims)
      throw ArgumentError("pipeline mixes 2D and 3D layers (layer " + std::to_string(i) + ")");
  }
}

template <typename T>
AugResult<T> Pipeline<T>::forward(const Tensor<T>& x) {
  validate();
  AugResult<T> r;
  Tensor<T> current = x;
  for (std::size_t i = 0; i < layers.size(); ++i) {
    RngState stream = derive(rng, i);
    AugResult<T> step;
    try {
      step = layer_forward(layers[i], current, stream);
    } catch (const ShapeError& e) {
      throw ShapeError("layer " + std::to_string(i) + ": " + e.what());
    }
    current = step.output;
    r.transform = i == 0 ? step.transform : compose(step.transform, r.transform);
    for (auto& p : step.params) r.params.push_back(std::move(p));
  }
  r.output = current;
  ++rng.counter;
  return r;
}

template <typename T>
std::vector<NamedParam<T>> Pipeline<T>::parameters() const {
  std::vector<NamedParam<T>> out;
  for (std::size_t i = 0; i < layers.size(); ++i)
    for (const auto& [name, t] : layers[i].learnable)
      out.push_back({std::to_string(i) + "." + name, t, validity_box(layers[i].kind, name)});
  return out;
}

template <typename T>
Pipeline<T> Pipeline<T>::clone_for_thread(std::uint64_t index) const {
  Pipeline copy = *this;
  for (auto& layer : copy.layers)
    for (auto& [name, t] : layer.learnable) t = t.clone();
  copy.rng = derive(rng, (std::uint64_t{1} << 32) + index);
  return copy;
}

namespace aug {

Range jitter(double amount) { return {std::max(0.0, 1.0 - amount), 1.0 + amount}; }

template <typename T>
AugLayer<T> normalize(std::vector<double> mean, std::vector<double> std) {
  auto l = make<T>(LayerKind::normalize, 1.0);
  l.static_config["mean"] = std::move(mean);
  l.static_config["std"] = std::move(std);
  return checked(std::move(l));
}

template <typename T>
AugLayer<T> denormalize(std::vector<double> mean, std::vector<double> std) {
  auto l = make<T>(LayerKind::denormalize, 1.0);
  l.static_config["mean"] = std::move(mean);
  l.static_config["std"] = std::move(std);
  return checked(std::move(l));
}

template <typename T>
AugLayer<T> color_jitter(Range brightness, Range contrast, Range saturation, Range hue, double p) {
  auto l = make<T>(LayerKind::color_jitter, p);
  l.specs = {uniform("brightness", brightness), uniform("contrast", contrast),
             uniform("saturation", saturation), uniform("hue", hue)};
  return checked(std::move(l));
}

template <typename T>
AugLayer<T> grayscale(double p) {
  return checked(make<T>(LayerKind::grayscale, p));
}

template <typename T>
AugLayer<T> solarize(Range thresholds, double p) {
  auto l = make<T>(LayerKind::solarize, p);
  l.specs = {uniform("threshold", thresholds)};
  return checked(std::move(l));
}

template <typename T>
AugLayer<T> equalize(double p) {
  return checked(make<T>(LayerKind::equalize, p));
}

template <typename T>
AugLayer<T> sharpness(Range factor, double p) {
  auto l = make<T>(LayerKind::sharpness, p);
  l.specs = {uniform("factor", factor)};
  return checked(std::move(l));
}

template <typename T>
AugLayer<T> motion_blur(std::size_t kernel_size, Range angle_deg, Range direction, double p) {
  auto l = make<T>(LayerKind::motion_blur, p);
  l.static_config["kernel_size"] = {as_size(kernel_size)};
  l.specs = {uniform("angle", angle_deg), uniform("direction", direction)};
  return checked(std::move(l));
}

template <typename T>
AugLayer<T> mixup(Range lam, double p) {
  auto l = make<T>(LayerKind::mixup, p);
  l.specs = {uniform("lam", lam), uniform("key", {0.0, 1.0})};
  return checked(std::move(l));
}

template <typename T>
AugLayer<T> cutmix(Range box_scale, double p) {
  auto l = make<T>(LayerKind::cutmix, p);
  l.specs = {uniform("area", box_scale), uniform("center", {0.0, 1.0}, 2), uniform("key", {0.0, 1.0})};
  return checked(std::move(l));
}

template <typename T>
AugLayer<T> horizontal_flip(double p) {
  return checked(make<T>(LayerKind::horizontal_flip, p));
}

template <typename T>
AugLayer<T> vertical_flip(double p) {
  return checked(make<T>(LayerKind::vertical_flip, p));
}

template <typename T>
AugLayer<T> rotation(Range degrees, double p) {
  auto l = make<T>(LayerKind::rotation, p);
  l.specs = {uniform("angle", degrees)};
  return checked(std::move(l));
}

template <typename T>
AugLayer<T> affine(Range degrees, Range translate, Range scale, Range shear, double p) {
  auto l = make<T>(LayerKind::affine, p);
  l.specs = {uniform("angle", degrees), uniform("translate", translate, 2), uniform("scale", scale),
             uniform("shear", shear, 2)};
  return checked(std::move(l));
}

template <typename T>
AugLayer<T> perspective(double distortion_scale, double p) {
  if (!(distortion_scale >= 0.0 && distortion_scale <= 1.0))
    throw ArgumentError("Perspective: distortion_scale must lie in [0, 1]");
  auto l = make<T>(LayerKind::perspective, p);
  l.specs = {uniform("offsets", {0.0, distortion_scale}, 8)};
  return checked(std::move(l));
}

template <typename T>
AugLayer<T> center_crop(std::size_t height, std::size_t width) {
  auto l = make<T>(LayerKind::center_crop, 1.0);
  l.static_config["size"] = {as_size(height), as_size(width)};
  return checked(std::move(l));
}

template <typename T>
AugLayer<T> crop(std::size_t height, std::size_t width, std::size_t padding) {
  auto l = make<T>(LayerKind::crop, 1.0);
  l.static_config["size"] = {as_size(height), as_size(width)};
  l.static_config["padding"] = {as_size(padding)};
  l.specs = {uniform("offset", {0.0, 1.0}, 2)};
  return checked(std::move(l));
}

template <typename T>
AugLayer<T> resized_crop(std::size_t height, std::size_t width, Range scale, Range ratio, double p) {
  if (!(ratio.lo > 0.0 && ratio.hi >= ratio.lo))
    throw ArgumentError("ResizedCrop: ratio range must be positive and ordered");
  auto l = make<T>(LayerKind::resized_crop, p);
  l.static_config["size"] = {as_size(height), as_size(width)};
  l.specs = {uniform("scale", scale, detail::kBoxAttempts),
             uniform("log_ratio", {std::log(ratio.lo), std::log(ratio.hi)}, detail::kBoxAttempts),
             uniform("position", {0.0, 1.0}, 2 * detail::kBoxAttempts)};
  return checked(std::move(l));
}

template <typename T>
AugLayer<T> erasing(Range scale, Range ratio, double fill, double p) {
  if (!(ratio.lo > 0.0 && ratio.hi >= ratio.lo))
    throw ArgumentError("Erasing: ratio range must be positive and ordered");
  auto l = make<T>(LayerKind::erasing, p);
  l.static_config["fill"] = {fill};
  l.specs = {uniform("scale", scale, detail::kBoxAttempts),
             uniform("log_ratio", {std::log(ratio.lo), std::log(ratio.hi)}, detail::kBoxAttempts),
             uniform("position", {0.0, 1.0}, 2 * detail::kBoxAttempts)};
  return checked(std::move(l));
}

template <typename T>
AugLayer<T> horizontal_flip3d(double p) {
  return checked(make<T>(LayerKind::horizontal_flip3d, p));
}

template <typename T>
AugLayer<T> vertical_flip3d(double p) {
  return checked(make<T>(LayerKind::vertical_flip3d, p));
}

template <typename T>
AugLayer<T> depthical_flip3d(double p) {
  return checked(make<T>(LayerKind::depthical_flip3d, p));
}

template <typename T>
AugLayer<T> center_crop3d(std::size_t depth, std::size_t height, std::size_t width) {
  auto l = make<T>(LayerKind::center_crop3d, 1.0);
  l.static_config["size"] = {as_size(depth), as_size(height), as_size(width)};
  return checked(std::move(l));
}

template <typename T>
AugLayer<T> crop3d(std::size_t depth, std::size_t height, std::size_t width, std::size_t padding) {
  auto l = make<T>(LayerKind::crop3d, 1.0);
  l.static_config["size"] = {as_size(depth), as_size(height), as_size(width)};
  l.static_config["padding"] = {as_size(padding)};
  l.specs = {uniform("offset", {0.0, 1.0}, 3)};
  return checked(std::move(l));
}

template <typename T>
AugLayer<T> affine3d(Range degrees, Range translate, Range scale, double p) {
  auto l = make<T>(LayerKind::affine3d, p);
  l.specs = {uniform("angle", degrees, 3), uniform("translate", translate, 3), uniform("scale", scale)};
  return checked(std::move(l));
}

template <typename T>
AugLayer<T> perspective3d(double distortion_scale, double p) {
  if (!(distortion_scale >= 0.0 && distortion_scale <= 1.0))
    throw ArgumentError("Perspective3D: distortion_scale must lie in [0, 1]");
  auto l = make<T>(LayerKind::perspective3d, p);
  l.specs = {uniform("offsets", {0.0, distortion_scale}, 24)};
  return checked(std::move(l));
}

}  // namespace aug

#define DDAUG_INSTANTIATE(T)                                                                      \
  template struct AugLayer<T>;                                                                    \
  template class Pipeline<T>;                                                                     \
  template AugResult<T> layer_forward<T>(const AugLayer<T>&, const Tensor<T>&, RngState&);        \
  template AugLayer<T> aug::normalize<T>(std::vector<double>, std::vector<double>);               \
  template AugLayer<T> aug::denormalize<T>(std::vector<double>, std::vector<double>);             \
  template AugLayer<T> aug::color_jitter<T>(Range, Range, Range, Range, double);                  \
  template AugLayer<T> aug::grayscale<T>(double);                                                 \
  template AugLayer<T> aug::solarize<T>(Range, double);                                           \
  template AugLayer<T> aug::equalize<T>(double);                                                  \
  template AugLayer<T> aug::sharpness<T>(Range, double);                                          \
  template AugLayer<T> aug::motion_blur<T>(std::size_t, Range, Range, double);                    \
  template AugLayer<T> aug::mixup<T>(Range, double);                                              \
  template AugLayer<T> aug::cutmix<T>(Range, double);                                             \
  template AugLayer<T> aug::horizontal_flip<T>(double);                                           \
  template AugLayer<T> aug::vertical_flip<T>(double);                                             \
  template AugLayer<T> aug::rotation<T>(Range, double);                                           \
  template AugLayer<T> aug::affine<T>(Range, Range, Range, Range, double);                        \
  template AugLayer<T> aug::perspective<T>(double, double);                                       \
  template AugLayer<T> aug::center_crop<T>(std::size_t, std::size_t);                             \
  template AugLayer<T> aug::crop<T>(std::size_t, std::size_t, std::size_t);                       \
  template AugLayer<T> aug::resized_crop<T>(std::size_t, std::size_t, Range, Range, double);      \
  template AugLayer<T> aug::erasing<T>(Range, Range, double, double);                             \
  template AugLayer<T> aug::horizontal_flip3d<T>(double);                                         \
  template AugLayer<T> aug::vertical_flip3d<T>(double);                                           \
  template AugLayer<T> aug::depthical_flip3d<T>(double);                                          \
  template AugLayer<T> aug::center_crop3d<T>(std::size_t, std::size_t, std::size_t);              \
  template AugLayer<T> aug::crop3d<T>(std::size_t, std::size_t, std::size_t, std::size_t);        \
  template AugLayer<T> aug::affine3d<T>(Range, Range, Range, double);                             \
  template AugLayer<T> aug::perspective3d<T>(double, double);

DDAUG_INSTANTIATE(float)
DDAUG_INSTANTIATE(double)
#undef DDAUG_INSTANTIATE

}  // namespace ddaug
