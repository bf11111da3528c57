// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace woldkit {

enum class ErrorKind {
  NotPSD,
  DimensionMismatch,
  BudgetExceeded,
  ParseError,
  ShapeError,
  IdentityViolated,
  NotRegular,
  PreconditionFailed,
  NotInvariant,
  NotLeftInvertible,
  NotContraction,
  NotInvertible,
  ConditionIViolated,
  InvalidParams,
};

const char* to_string(ErrorKind k) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void raise(ErrorKind k, const std::string& what) { throw Error(k, what); }

inline const char* to_string(ErrorKind k) noexcept {
  switch (k) {
    case ErrorKind::NotPSD: return "NotPSD";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::BudgetExceeded: return "BudgetExceeded";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::ShapeError: return "ShapeError";
    case ErrorKind::IdentityViolated: return "IdentityViolated";
    case ErrorKind::NotRegular: return "NotRegular";
    case ErrorKind::PreconditionFailed: return "PreconditionFailed";
    case ErrorKind::NotInvariant: return "NotInvariant";
    case ErrorKind::NotLeftInvertible: return "NotLeftInvertible";
    case ErrorKind::NotContraction: return "NotContraction";
    case ErrorKind::NotInvertible: return "NotInvertible";
    case ErrorKind::ConditionIViolated: return "ConditionIViolated";
    case ErrorKind::InvalidParams: return "InvalidParams";
  }
  return "Error";
}

}  // namespace woldkit
