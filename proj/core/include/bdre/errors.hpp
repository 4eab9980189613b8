// Copyright 2026 The bdre Authors.
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

#ifndef BDRE_ERRORS_HPP_
#define BDRE_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace bdre {

// Base of every error raised by the library. `kind()` is a stable token used
// in machine-readable diagnostics; `exit_code()` is the process exit status
// the command-line tool maps it to.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual const char* kind() const noexcept = 0;
  virtual int exit_code() const noexcept = 0;
};

// Invalid or inconsistent user configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "config"; }
  int exit_code() const noexcept override { return 2; }
};

// Argument outside the domain where a formula is defined.
class DomainError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "domain"; }
  int exit_code() const noexcept override { return 2; }
};

// Request that is well posed but numerically unstable (e.g. tiny horizon).
class StabilityError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "stability"; }
  int exit_code() const noexcept override { return 3; }
};

// Quadrature or simulation could not reach the requested accuracy.
class AccuracyError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "accuracy"; }
  int exit_code() const noexcept override { return 4; }
};

}  // namespace bdre

#endif  // BDRE_ERRORS_HPP_
