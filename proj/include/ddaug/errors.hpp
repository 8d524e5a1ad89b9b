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
#include <stdexcept>
#include <string>

namespace ddaug {

/// Base class of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Incompatible tensor shapes, ranks, or channel counts.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// An argument outside the operation's documented domain.
class ArgumentError : public Error {
 public:
  using Error::Error;
};

/// Misuse of the autodiff graph (non-scalar root, constant root, ...).
class GraphError : public Error {
 public:
  using Error::Error;
};

class SingularMatrixError : public Error {
 public:
  SingularMatrixError(std::size_t batch_index, double det)
      : Error("singular transform matrix at batch index " +
              std::to_string(batch_index) + " (det = " + std::to_string(det) + ")"),
        batch_index_(batch_index) {}

  std::size_t batch_index() const noexcept { return batch_index_; }

 private:
  std::size_t batch_index_;
};

/// Rank-deficient point configuration for a homography solve.
class DegenerateError : public Error {
 public:
  using Error::Error;
};

/// Malformed or incompatible pipeline document.
class FormatError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace ddaug
