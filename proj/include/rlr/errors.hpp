// Copyright 2026 The rlr Authors. All Rights Reserved.
//
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

#ifndef RLR_ERRORS_HPP_
#define RLR_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace rlr {

/// Base class for every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A caller broke a precondition (shape mismatch, rank too large, ...).
class ContractViolation : public Error {
 public:
  using Error::Error;
};

/// Inputs outside the domain of a closed-form expression.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// The dense linear-algebra backend failed to converge.
class BackendError : public Error {
 public:
  using Error::Error;
};

/// Contradictory or out-of-range solver / run configuration. `field()` names
/// the offending setting.
class ConfigError : public Error {
 public:
  ConfigError(std::string field, const std::string& what)
      : Error(field + ": " + what), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

}  // namespace rlr

#endif  // RLR_ERRORS_HPP_
