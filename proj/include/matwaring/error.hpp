#ifndef MATWARING_ERROR_HPP
#define MATWARING_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace matwaring {

enum class ErrorCode {
  DivisionByZero,
  ZeroOrderUndefined,
  BudgetExceeded,
  NoLogarithm,
  NoDecomposition,
  NotMonic,
  NotIrreducible,
  NoSuchPolynomial,
  CoefficientNotInBase,
  SingularMatrix,
  NotSimilar,
  PrescriptionViolation,
  DegenerateBasis,
  WitnessInvalid,
  SingularGeometricSum,
  TraceMismatch,
  ShapeViolation,
  CharPolyViolation,
  OrderNotCoprime,
  PreconditionViolated,
  FallbackExhausted,
  TheoremContradiction,
  InvalidArgument,
  ParseError,
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DivisionByZero: return "DivisionByZero";
    case ErrorCode::ZeroOrderUndefined: return "ZeroOrderUndefined";
    case ErrorCode::BudgetExceeded: return "BudgetExceeded";
    case ErrorCode::NoLogarithm: return "NoLogarithm";
    case ErrorCode::NoDecomposition: return "NoDecomposition";
    case ErrorCode::NotMonic: return "NotMonic";
    case ErrorCode::NotIrreducible: return "NotIrreducible";
    case ErrorCode::NoSuchPolynomial: return "NoSuchPolynomial";
    case ErrorCode::CoefficientNotInBase: return "CoefficientNotInBase";
    case ErrorCode::SingularMatrix: return "SingularMatrix";
    case ErrorCode::NotSimilar: return "NotSimilar";
    case ErrorCode::PrescriptionViolation: return "PrescriptionViolation";
    case ErrorCode::DegenerateBasis: return "DegenerateBasis";
    case ErrorCode::WitnessInvalid: return "WitnessInvalid";
    case ErrorCode::SingularGeometricSum: return "SingularGeometricSum";
    case ErrorCode::TraceMismatch: return "TraceMismatch";
    case ErrorCode::ShapeViolation: return "ShapeViolation";
    case ErrorCode::CharPolyViolation: return "CharPolyViolation";
    case ErrorCode::OrderNotCoprime: return "OrderNotCoprime";
    case ErrorCode::PreconditionViolated: return "PreconditionViolated";
    case ErrorCode::FallbackExhausted: return "FallbackExhausted";
    case ErrorCode::TheoremContradiction: return "TheoremContradiction";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the codes above so
/// callers (the CLI in particular) can map it to an exit status.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

inline void require(bool cond, ErrorCode code, const std::string& what) {
  if (!cond) fail(code, what);
}

}  // namespace matwaring

#endif  // MATWARING_ERROR_HPP
