// Copyright 2026 The vqcqp Authors.
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
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

namespace vqcqp {

// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input matrix or constraint fails a structural check (symmetry, shape, bounds).
class ValidationError : public Error {
 public:
  using Error::Error;
};

// A tuning parameter is out of its admissible range.
class ParameterError : public Error {
 public:
  using Error::Error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

// Non-finite intermediate or a consistency check that should never trip.
class NumericalError : public Error {
 public:
  using Error::Error;
};

// The Newton system stayed singular after the full regularization ladder.
class StepFailure : public Error {
 public:
  StepFailure(const std::string& what, std::size_t iteration)
      : Error(what + " (iteration " + std::to_string(iteration) + ")"),
        iteration_(iteration) {}
  std::size_t iteration() const { return iteration_; }

 private:
  std::size_t iteration_;
};

class LineSearchFailure : public Error {
 public:
  using Error::Error;
};

class NoInteriorFound : public Error {
 public:
  using Error::Error;
};

// Files that parse but do not follow the expected document layout.
class SchemaError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace vqcqp
