// Copyright 2026 The Gamepot Authors
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

#ifndef GAMEPOT_ERRORS_HPP_
#define GAMEPOT_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace gamepot {

/// Parameter outside its documented domain (probability outside [0,1], ...).
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Operation on a session in the wrong state (double close, input after close).
class SessionStateError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Fixed-point iteration ran out of budget; carries the last residual.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double lambda, double residual)
      : std::runtime_error(what), lambda_(lambda), residual_(residual) {}
  ConvergenceError(double lambda, double residual)
      : ConvergenceError("no fixed point within budget at lambda " +
                             std::to_string(lambda) + " (residual " +
                             std::to_string(residual) + ")",
                         lambda, residual) {}
  double lambda() const { return lambda_; }
  double residual() const { return residual_; }

 private:
  double lambda_;
  double residual_;
};

/// Strict-mode log parsing failure; carries the 1-based line number.
class LogParseError : public std::runtime_error {
 public:
  LogParseError(const std::string& what, std::size_t line)
      : std::runtime_error(what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Bad configuration file or unusable service configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace gamepot

#endif  // GAMEPOT_ERRORS_HPP_
