#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace hckit {

enum class ErrorKind {
  kDomainError,
  kOriginNotRepresentable,
  kDegenerateDerivative,
  kNotContact,
  kNotClosed,
  kPathOutsideDomain,
  kOperatorsNonzero,
  kZeroAtBase,
  kBranchCutCrossed,
  kQuadratureNotConverged,
  kNotAdmissible,
  kUnknownIdentifier,
  kParameterConstraintViolated,
  kImageNotTrajectory,
  kOrderExceeded,
  kInvalidParameters,
};

constexpr std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kDomainError: return "DomainError";
    case ErrorKind::kOriginNotRepresentable: return "OriginNotRepresentable";
    case ErrorKind::kDegenerateDerivative: return "DegenerateDerivative";
    case ErrorKind::kNotContact: return "NotContact";
    case ErrorKind::kNotClosed: return "NotClosed";
    case ErrorKind::kPathOutsideDomain: return "PathOutsideDomain";
    case ErrorKind::kOperatorsNonzero: return "OperatorsNonzero";
    case ErrorKind::kZeroAtBase: return "ZeroAtBase";
    case ErrorKind::kBranchCutCrossed: return "BranchCutCrossed";
    case ErrorKind::kQuadratureNotConverged: return "QuadratureNotConverged";
    case ErrorKind::kNotAdmissible: return "NotAdmissible";
    case ErrorKind::kUnknownIdentifier: return "UnknownIdentifier";
    case ErrorKind::kParameterConstraintViolated: return "ParameterConstraintViolated";
    case ErrorKind::kImageNotTrajectory: return "ImageNotTrajectory";
    case ErrorKind::kOrderExceeded: return "OrderExceeded";
    case ErrorKind::kInvalidParameters: return "InvalidParameters";
  }
  return "Unknown";
}

/// Every failure raised by the toolkit carries a kind so callers (the CLI in
/// particular) can map it to a stable exit code.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace hckit
