#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace hjt {

enum class ErrorKind {
  GuardViolation,
  NonFinite,
  DimensionMismatch,
  NumericallySingular,
  InconsistentSingularSystem,
  SingularHessian,
  SingularOmega,
  EmptyGrid,
  NewtonDiverged,
  DegenerateFiberJacobian,
  NullVector,
  NotInAlgebra,
  SingularInertia,
  ZeroPoint,
  Unsupported,
  SyntaxError,
  UnknownIdentifier,
  Usage,
};

inline std::string_view to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::GuardViolation: return "GuardViolation";
    case ErrorKind::NonFinite: return "NonFinite";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::NumericallySingular: return "NumericallySingular";
    case ErrorKind::InconsistentSingularSystem: return "InconsistentSingularSystem";
    case ErrorKind::SingularHessian: return "SingularHessian";
    case ErrorKind::SingularOmega: return "SingularOmega";
    case ErrorKind::EmptyGrid: return "EmptyGrid";
    case ErrorKind::NewtonDiverged: return "NewtonDiverged";
    case ErrorKind::DegenerateFiberJacobian: return "DegenerateFiberJacobian";
    case ErrorKind::NullVector: return "NullVector";
    case ErrorKind::NotInAlgebra: return "NotInAlgebra";
    case ErrorKind::SingularInertia: return "SingularInertia";
    case ErrorKind::ZeroPoint: return "ZeroPoint";
    case ErrorKind::Unsupported: return "Unsupported";
    case ErrorKind::SyntaxError: return "SyntaxError";
    case ErrorKind::UnknownIdentifier: return "UnknownIdentifier";
    case ErrorKind::Usage: return "Usage";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the kinds above.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Parse failures keep the 1-based position of the offending token.
class SyntaxError : public Error {
 public:
  SyntaxError(int line, int col, const std::string& what)
      : Error(ErrorKind::SyntaxError,
              "line " + std::to_string(line) + ", col " + std::to_string(col) + ": " + what),
        line_(line), col_(col) {}

  int line() const noexcept { return line_; }
  int col() const noexcept { return col_; }

 private:
  int line_;
  int col_;
};

}  // namespace hjt
