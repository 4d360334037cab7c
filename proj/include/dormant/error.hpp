#pragma once

#include <stdexcept>
#include <string>

namespace dormant {

enum class ErrorCode {
  InvalidArgument,
  NotPrime,
  ZeroDenominator,
  InsufficientPrecision,
  SingularPoint,
  NewtonStall,
  ZeroElement,
  NotOnCurve,
  UndeclaredPoleDetected,
  BadTrivialization,
  NoRationalGenerator,
  NotFlat,
  NonzeroShiftedMonodromy,
  CurveMismatch,
  NotOmegaBundle,
  NotPreTango,
  InvalidCertificate,
  IncompleteDivisor,
  CandidateIsPthPower,
  NotDivisibleByP,
  WrongDegree,
  PNotDividing2gMinus2,
  NotPrincipal,
  DegenerateKS,
  NotDormant,
  UnsupportedCurve,
  PremiseViolated,
  NotExactOnChart,
  UnitFailure,
  SyntaxError,
  SemanticError,
};

const char* error_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail);
  ErrorCode code() const noexcept { return code_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

[[noreturn]] void raise(ErrorCode code, const std::string& detail = {});

}  // namespace dormant
