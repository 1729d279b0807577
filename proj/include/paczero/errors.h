//
// Copyright 2026 The paczero Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef PACZERO_ERRORS_H_
#define PACZERO_ERRORS_H_

#include <stdexcept>
#include <string>

namespace paczero {

// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A requested MI budget cannot be realized by the binary channel.
class InfeasibleBudgetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Calibration was requested for a unanimous (constant) input.
class UnanimityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Non-finite loss or parameter encountered during training.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed config or transcript.
class SchemaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace paczero

#endif  // PACZERO_ERRORS_H_
