#include "dormant/tango.hpp"

#include <algorithm>
#include <cstdlib>

#include "dormant/cartier.hpp"
#include "dormant/error.hpp"

namespace dormant {

TangoCertificate certify_tango_structure(const CurvePtr& curve, const FFElem& f) {
  if (f.curve() != curve) raise(ErrorCode::CurveMismatch, "certificate function on another curve");
  const long long p = curve->p();
  const long long two_g_2 = 2LL * curve->genus() - 2;
  if (two_g_2 % p != 0)
    raise(ErrorCode::PNotDividing2gMinus2, "p = " + std::to_string(p) + " does not divide 2g-2 = " + std::to_string(two_g_2));
  const FFElem df = f.derivative();
  if (df.is_zero()) raise(ErrorCode::CandidateIsPthPower, "f lies in K^p");
  DivisorReport rep = divisor_of_differential(df, rational_places(*curve));
  if (!rep.complete)
    raise(ErrorCode::IncompleteDivisor, "rational part of (df) has degree " + std::to_string(rep.degree) +
                                            ", expected " + std::to_string(two_g_2));
  for (const auto& [place, v] : rep.divisor)
    if (v % p != 0) raise(ErrorCode::NotDivisibleByP, "coefficient " + std::to_string(v) + " at " + place);
  TangoCertificate cert;
  cert.curve = curve;
  cert.f = f;
  cert.df_divisor = rep.divisor;
  cert.floor_divisor = floor_div(rep.divisor, p);
  cert.degree = degree(cert.floor_divisor);
  if (cert.degree != two_g_2 / p)
    raise(ErrorCode::WrongDegree, "deg D = " + std::to_string(cert.degree) + ", expected " + std::to_string(two_g_2 / p));
  return cert;
}

bool recheck_certificate(const TangoCertificate& cert) {
  const CurvePtr& curve = cert.curve;
  const FFElem df = cert.f.derivative();
  const int prec = std::min(2 * start_precision(*curve, 0), kMaxPrecision);
  Divisor again;
  for (const Place& pl : rational_places(*curve)) {
    int pr = prec;
    for (;;) {
      TruncSeries s = branch_at(curve, pl, pr).expand_form(df);
      if (!s.is_zero()) {
        if (s.ord() != 0) again[place_label(*curve, pl)] = s.ord();
        break;
      }
      if (pr >= kMaxPrecision) return false;
      pr = std::min(pr * 2, kMaxPrecision);
    }
  }
  return again == cert.df_divisor && scaled(cert.floor_divisor, curve->p()) == cert.df_divisor;
}

long long tango_invariant_lower_bound(const CurvePtr& curve, const std::vector<FFElem>& candidates) {
  const long long p = curve->p();
  const long long two_g_2 = 2LL * curve->genus() - 2;
  bool any = false;
  long long best = 0;
  for (const FFElem& f : candidates) {
    const FFElem df = f.derivative();
    if (df.is_zero()) raise(ErrorCode::CandidateIsPthPower, "candidate lies in K^p");
    DivisorReport rep = divisor_of_differential(df, rational_places(*curve));
    if (!rep.complete) continue;
    const long long v = degree(floor_div(rep.divisor, p));
    best = any ? std::max(best, v) : v;
    any = true;
  }
  if (!any) raise(ErrorCode::IncompleteDivisor, "no candidate has a divisor supported on rational places");
  // floor((2g-2)/p)
  long long bound = two_g_2 / p;
  if (two_g_2 % p != 0 && two_g_2 < 0) --bound;
  if (best > bound) raise(ErrorCode::IncompleteDivisor, "lower bound exceeds (2g-2)/p");
  return best;
}

std::vector<TangoCertificate> tango_search(const CurvePtr& curve, int height, std::size_t max_results) {
  std::vector<TangoCertificate> found;
  if (curve->kind() == CurveKind::P1Marked) return found;
  const long long two_g_2 = 2LL * curve->genus() - 2;
  if (two_g_2 % curve->p() != 0) return found;
  // Monomials x^i y^j ordered by |i| + |j|, then i, then j.
  std::vector<std::pair<int, int>> exps;
  for (int i = -height; i <= height; ++i)
    for (int j = -height; j <= height; ++j) exps.emplace_back(i, j);
  std::stable_sort(exps.begin(), exps.end(), [](auto a, auto b) {
    return std::abs(a.first) + std::abs(a.second) < std::abs(b.first) + std::abs(b.second);
  });
  for (auto [i, j] : exps) {
    FFElem f = curve->x().pow(i) * curve->y().pow(j);
    if (f.derivative().is_zero()) continue;
    try {
      found.push_back(certify_tango_structure(curve, f));
    } catch (const Error&) {
      continue;
    }
    if (found.size() >= max_results) break;
  }
  return found;
}

GeneralizedTangoCurve build_generalized_tango(const TangoCertificate& cert, const Divisor& n_divisor, int index,
                                              const FFElem& nu) {
  if (index < 1) raise(ErrorCode::InvalidArgument, "index must be positive");
  const CurvePtr& curve = cert.curve;
  const long long p = curve->p();
  const Divisor target = add(scaled(n_divisor, index * p - 1), scaled(cert.floor_divisor, -1));
  if (degree(target) != 0) raise(ErrorCode::NotPrincipal, "(lp-1) N - D has nonzero degree");
  if (nu.is_zero()) raise(ErrorCode::NotPrincipal, "zero witness");
  DivisorReport rep = divisor_of_function(nu, rational_places(*curve));
  if (!rep.complete || rep.divisor != target)
    raise(ErrorCode::NotPrincipal, "div(nu) = " + to_string(rep.divisor) + ", expected " + to_string(target));
  GeneralizedTangoCurve g;
  g.curve = curve;
  g.cert = cert;
  g.l_divisor = cert.floor_divisor;
  g.n_divisor = n_divisor;
  g.index = index;
  g.nu = nu;
  return g;
}

LogConnection pretango_from_tango(const TangoCertificate& cert) { return pretango_from_function(cert.f); }

FFElem tango_function_from_pretango(const LogConnection& c) {
  PreTangoReport rep = is_pre_tango(c);
  if (!rep.pre_tango) raise(ErrorCode::NotPreTango, rep.flat ? "horizontal section is not exact" : "not flat");
  auto f = exact_primitive(*rep.generator * c.curve()->eta());
  if (!f) raise(ErrorCode::NotPreTango, "horizontal section is not exact");
  return *f;
}

}  // namespace dormant
