#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace cot_atlas {

enum class ErrorKind {
  Unreachable,
  SingularJacobian,
  NumericalBlowup,
  FrictionConeInfeasible,
  Timeout,
  WindowOutOfRange,
  ZeroDistance,
  TooManySingularRows,
  InsufficientOverlap,
  AllTrialsFailed,
  ParseError,
  UnknownKey,
  InvariantViolation,
  SchemaError,
  NonMonotoneTime,
  UnitSanity,
  Io,
};

std::string_view error_kind_name(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(error_kind_name(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class ParseError : public Error {
 public:
  ParseError(int line, int column, const std::string& what)
      : Error(ErrorKind::ParseError,
              "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what),
        line_(line),
        column_(column) {}

  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

 private:
  int line_;
  int column_;
};

}  // namespace cot_atlas
