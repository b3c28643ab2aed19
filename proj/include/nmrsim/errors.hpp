// Copyright 2026 The nmrsim Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
/**
 * @file
 * Exception hierarchy shared by every nmrsim module.
 */
#pragma once

#include <stdexcept>
#include <string>

namespace nmrsim {

/// Coarse error category; the CLI maps each one to a distinct exit code.
enum class ErrorKind {
    Usage = 2,
    Io = 3,
    Capability = 4,
    Numerical = 5,
    Data = 6,
};

class Error : public std::runtime_error {
  public:
    Error(ErrorKind kind, const std::string &what)
        : std::runtime_error(what), kind_(kind) {}
    [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }

  private:
    ErrorKind kind_;
};

/// Malformed input text; carries the 1-based line number when known.
class ParseError : public Error {
  public:
    ParseError(const std::string &what, int line = 0)
        : Error(ErrorKind::Data,
                line > 0 ? "line " + std::to_string(line) + ": " + what
                         : what),
          line_(line) {}
    [[nodiscard]] int line() const noexcept { return line_; }

  private:
    int line_;
};

class ValidationError : public Error {
  public:
    explicit ValidationError(const std::string &what)
        : Error(ErrorKind::Data, what) {}
};

class ArgumentError : public Error {
  public:
    explicit ArgumentError(const std::string &what)
        : Error(ErrorKind::Usage, what) {}
};

/// Requested work exceeds what this build is willing to do (memory caps).
class CapabilityError : public Error {
  public:
    explicit CapabilityError(const std::string &what)
        : Error(ErrorKind::Capability, what) {}
};

class RoutingError : public Error {
  public:
    explicit RoutingError(const std::string &what)
        : Error(ErrorKind::Capability, what) {}
};

class MitigationError : public Error {
  public:
    MitigationError(const std::string &what, double condition_number)
        : Error(ErrorKind::Numerical, what), condition_(condition_number) {}
    [[nodiscard]] double condition_number() const noexcept {
        return condition_;
    }

  private:
    double condition_;
};

class NumericalError : public Error {
  public:
    explicit NumericalError(const std::string &what)
        : Error(ErrorKind::Numerical, what) {}
};

class IoError : public Error {
  public:
    explicit IoError(const std::string &what) : Error(ErrorKind::Io, what) {}
};

} // namespace nmrsim
