#pragma once

#include <vector>

#include "dormant/branch.hpp"
#include "dormant/connection.hpp"

namespace dormant {

struct TangoCertificate {
  CurvePtr curve;
  FFElem f;
  Divisor df_divisor;
  Divisor floor_divisor;
  long long degree = 0;
};

// Complete divisor of df, every coefficient divisible by p, deg floor = (2g-2)/p.
// Errors: PNotDividing2gMinus2, CandidateIsPthPower, IncompleteDivisor, NotDivisibleByP, WrongDegree.
TangoCertificate certify_tango_structure(const CurvePtr& curve, const FFElem& f);
// Re-derives the divisor at doubled precision and checks p floor = (df).
bool recheck_certificate(const TangoCertificate& cert);

// max deg floor((df)/p) over candidates; errors IncompleteDivisor, CandidateIsPthPower.
long long tango_invariant_lower_bound(const CurvePtr& curve, const std::vector<FFElem>& candidates);

// Bounded search over monomials x^i y^j with |i|, |j| <= height; test-harness helper.
std::vector<TangoCertificate> tango_search(const CurvePtr& curve, int height, std::size_t max_results);

struct GeneralizedTangoCurve {
  CurvePtr curve;
  TangoCertificate cert;
  Divisor l_divisor;  // the Tango divisor D
  Divisor n_divisor;
  int index = 1;
  FFElem nu;  // div(nu) = (index p - 1) N - D
};

// Checks that (index p - 1) N - D is the divisor of nu; NotPrincipal otherwise.
GeneralizedTangoCurve build_generalized_tango(const TangoCertificate& cert, const Divisor& n_divisor, int index,
                                              const FFElem& nu);

// Tango structure -> pre-Tango connection and back.
LogConnection pretango_from_tango(const TangoCertificate& cert);
// Certificate function f with df = u eta for the horizontal section of a pre-Tango connection.
FFElem tango_function_from_pretango(const LogConnection& c);

}  // namespace dormant
