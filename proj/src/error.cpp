#include "dormant/error.hpp"

namespace dormant {

const char* error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::NotPrime: return "NotPrime";
    case ErrorCode::ZeroDenominator: return "ZeroDenominator";
    case ErrorCode::InsufficientPrecision: return "InsufficientPrecision";
    case ErrorCode::SingularPoint: return "SingularPoint";
    case ErrorCode::NewtonStall: return "NewtonStall";
    case ErrorCode::ZeroElement: return "ZeroElement";
    case ErrorCode::NotOnCurve: return "NotOnCurve";
    case ErrorCode::UndeclaredPoleDetected: return "UndeclaredPoleDetected";
    case ErrorCode::BadTrivialization: return "BadTrivialization";
    case ErrorCode::NoRationalGenerator: return "NoRationalGenerator";
    case ErrorCode::NotFlat: return "NotFlat";
    case ErrorCode::NonzeroShiftedMonodromy: return "NonzeroShiftedMonodromy";
    case ErrorCode::CurveMismatch: return "CurveMismatch";
    case ErrorCode::NotOmegaBundle: return "NotOmegaBundle";
    case ErrorCode::NotPreTango: return "NotPreTango";
    case ErrorCode::InvalidCertificate: return "InvalidCertificate";
    case ErrorCode::IncompleteDivisor: return "IncompleteDivisor";
    case ErrorCode::CandidateIsPthPower: return "CandidateIsPthPower";
    case ErrorCode::NotDivisibleByP: return "NotDivisibleByP";
    case ErrorCode::WrongDegree: return "WrongDegree";
    case ErrorCode::PNotDividing2gMinus2: return "PNotDividing2gMinus2";
    case ErrorCode::NotPrincipal: return "NotPrincipal";
    case ErrorCode::DegenerateKS: return "DegenerateKS";
    case ErrorCode::NotDormant: return "NotDormant";
    case ErrorCode::UnsupportedCurve: return "UnsupportedCurve";
    case ErrorCode::PremiseViolated: return "PremiseViolated";
    case ErrorCode::NotExactOnChart: return "NotExactOnChart";
    case ErrorCode::UnitFailure: return "UnitFailure";
    case ErrorCode::SyntaxError: return "SyntaxError";
    case ErrorCode::SemanticError: return "SemanticError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& detail)
    : std::runtime_error(detail.empty() ? std::string(error_name(code))
                                        : std::string(error_name(code)) + ": " + detail),
      code_(code),
      detail_(detail) {}

void raise(ErrorCode code, const std::string& detail) { throw Error(code, detail); }

}  // namespace dormant
