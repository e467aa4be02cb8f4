// Copyright 2026 The alig Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ALIG_ERRORS_HPP
#define ALIG_ERRORS_HPP

#include <cstdint>
#include <stdexcept>
#include <string>

namespace alig {

// Argument outside the mathematical domain of an operation (negative loss,
// non-finite input, non-positive constant, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A step-size ratio whose denominator vanishes while the numerator does not.
class DivisionUndefinedError : public DomainError {
 public:
  using DomainError::DomainError;
};

class DimensionMismatchError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Raised by the training loop when a loss or gradient stops being finite.
class RunAborted : public std::runtime_error {
 public:
  RunAborted(const std::string& what, std::int64_t iteration)
      : std::runtime_error(what), iteration_(iteration) {}

  std::int64_t iteration() const { return iteration_; }

 private:
  std::int64_t iteration_;
};

}  // namespace alig

#endif  // ALIG_ERRORS_HPP
