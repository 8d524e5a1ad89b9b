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

#include <filesystem>
#include <string>

#include "ddaug/layers.hpp"

namespace ddaug {

inline constexpr int kFormatVersion = 1;

/// Lossless text form of a double ("%a" style, e.g. 0x1.8p+0).
std::string hexfloat(double v);
double parse_hexfloat(const std::string& text);

/// Canonical document: sorted keys, two-space indent, trailing newline.
template <typename T>
std::string save_pipeline(const Pipeline<T>& pipe);

template <typename T>
void save_pipeline(const Pipeline<T>& pipe, const std::filesystem::path& path);

/// Throws FormatError (with a JSON-pointer location) on malformed input,
/// unknown keys or kinds, version mismatch and RNG algorithm mismatch.
template <typename T>
Pipeline<T> load_pipeline(const std::string& document);

template <typename T>
Pipeline<T> load_pipeline_file(const std::filesystem::path& path);

}  // namespace ddaug
