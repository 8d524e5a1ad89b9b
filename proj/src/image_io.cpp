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

#include "ddaug/image_io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <string>

#include "ddaug/ops.hpp"

namespace ddaug {

namespace {

template <typename T>
Tensor<T> as_single(const Tensor<T>& image) {
  if (image.rank() == 3 && image.dim(0) == 3)
    return reshape(image, {1, 3, image.dim(1), image.dim(2)});
  if (image.rank() == 4 && image.dim(0) == 1 && image.dim(1) == 3) return image;
  throw ShapeError("expected a (1, 3, H, W) or (3, H, W) image, got " + shape_str(image.shape()));
}

// Next header token, skipping whitespace and '#' comments.
std::string token(std::istream& in) {
  std::string t;
  int c;
  while ((c = in.get()) != EOF) {
    if (c == '#') {
      while ((c = in.get()) != EOF && c != '\n') {
      }
      continue;
    }
    if (std::isspace(c)) {
      if (!t.empty()) break;
      continue;
    }
    t.push_back(static_cast<char>(c));
  }
  return t;
}

}  // namespace

std::uint8_t quantize(double v) {
  if (!(v > 0.0)) return 0;
  return static_cast<std::uint8_t>(std::lround(std::min(v, 1.0) * 255.0));
}

template <typename T>
void write_ppm(const std::filesystem::path& path, const Tensor<T>& image) {
  const Tensor<T> img = as_single(image);
  const std::size_t h = img.dim(2), w = img.dim(3), plane = h * w;
  std::vector<std::uint8_t> bytes(3 * plane);
  const T* v = img.data().data();
  for (std::size_t p = 0; p < plane; ++p)
    for (std::size_t c = 0; c < 3; ++c) bytes[3 * p + c] = quantize(static_cast<double>(v[c * plane + p]));
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << "P6\n" << w << " " << h << "\n255\n";
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

template <typename T>
Tensor<T> read_ppm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  if (token(in) != "P6") throw FormatError("'" + path.string() + "' is not a binary PPM (P6)");
  std::size_t w = 0, h = 0, maxval = 0;
  try {
    w = std::stoul(token(in));
    h = std::stoul(token(in));
    maxval = std::stoul(token(in));
  } catch (const std::exception&) {
    throw FormatError("'" + path.string() + "' has a malformed PPM header");
  }
  if (maxval != 255 || w == 0 || h == 0)
    throw FormatError("'" + path.string() + "': only 8-bit PPM with non-zero size is supported");
  std::vector<std::uint8_t> bytes(3 * w * h);
  in.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (in.gcount() != static_cast<std::streamsize>(bytes.size()))
    throw FormatError("'" + path.string() + "' is truncated");
  std::vector<T> values(3 * w * h);
  const std::size_t plane = w * h;
  for (std::size_t p = 0; p < plane; ++p)
    for (std::size_t c = 0; c < 3; ++c) values[c * plane + p] = static_cast<T>(bytes[3 * p + c] / 255.0);
  return Tensor<T>({1, 3, h, w}, std::move(values));
}

template <typename T>
Tensor<T> side_by_side(const std::vector<Tensor<T>>& images) {
  if (images.empty()) throw ArgumentError("side_by_side needs at least one image");
  std::vector<Tensor<T>> parts;
  for (const auto& im : images) parts.push_back(as_single(im).detach());
  const std::size_t h = parts[0].dim(2);
  for (const auto& p : parts)
    if (p.dim(2) != h) throw ShapeError("side_by_side: images differ in height");
  std::size_t total_w = 0;
  for (const auto& p : parts) total_w += p.dim(3);
  std::vector<T> out(3 * h * total_w);
  std::size_t x0 = 0;
  for (const auto& p : parts) {
    const std::size_t w = p.dim(3);
    for (std::size_t c = 0; c < 3; ++c)
      for (std::size_t i = 0; i < h; ++i)
        std::copy_n(p.data().data() + (c * h + i) * w, w, out.data() + (c * h + i) * total_w + x0);
    x0 += w;
  }
  return Tensor<T>({1, 3, h, total_w}, std::move(out));
}

#define DDAUG_INSTANTIATE(T)                                                      \
  template void write_ppm<T>(const std::filesystem::path&, const Tensor<T>&);     \
  template Tensor<T> read_ppm<T>(const std::filesystem::path&);                   \
  template Tensor<T> side_by_side<T>(const std::vector<Tensor<T>>&);

DDAUG_INSTANTIATE(float)
DDAUG_INSTANTIATE(double)
#undef DDAUG_INSTANTIATE

}  // namespace ddaug
