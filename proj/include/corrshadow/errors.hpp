// Copyright (c) 2026 The corrshadow Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <stdexcept>
#include <string>

namespace corrshadow {

/// Error taxonomy shared by the C++ core, the C API status codes and the
/// CLI exit codes: Argument -> 2, Data -> 3, Numeric -> 4.
enum class ErrorKind {
  Argument,
  Data,
  Numeric,
  Resource,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string message)
      : std::runtime_error(std::move(message)), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class ArgumentError : public Error {
 public:
  explicit ArgumentError(std::string message)
      : Error(ErrorKind::Argument, std::move(message)) {}
};

class DataError : public Error {
 public:
  explicit DataError(std::string message)
      : Error(ErrorKind::Data, std::move(message)) {}
};

class ResourceError : public Error {
 public:
  explicit ResourceError(std::string message)
      : Error(ErrorKind::Resource, std::move(message)) {}
};

/// Numerical failure (non-convergence, indefinite matrix, ...).  Carries the
/// best estimate available at the point of failure when one exists.
class NumericError : public Error {
 public:
  explicit NumericError(std::string message)
      : Error(ErrorKind::Numeric, std::move(message)) {}
  NumericError(std::string message, double last_estimate)
      : Error(ErrorKind::Numeric, std::move(message)),
        last_estimate_(last_estimate) {}

  std::optional<double> last_estimate() const noexcept { return last_estimate_; }

 private:
  std::optional<double> last_estimate_;
};

/// Process exit code convention: 0 ok, 2 argument/config, 3 data, 4 numeric.
inline int exit_code(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::Argument: return 2;
    case ErrorKind::Data: return 3;
    case ErrorKind::Numeric: return 4;
    case ErrorKind::Resource: return 4;
  }
  return 1;
}

}  // namespace corrshadow
