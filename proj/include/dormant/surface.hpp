#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dormant/tango.hpp"

namespace dormant {

// An open subset of the curve: the complement of finitely many rational places,
// optionally also of every place on the line at infinity.
struct Chart {
  std::vector<Place> excluded;
  bool affine_only = false;
  bool excludes(const Place& q) const;
};
std::string chart_descriptor(const Curve& curve, const Chart& chart);  // "X - {z=0, [0:0:1]}"
Chart parse_chart(const Curve& curve, const std::string& text);
Chart intersect(const Chart& a, const Chart& b);

// Coefficients of det(T - M_f), highest degree first, M_f multiplication by f over F_p(x).
std::vector<RatFunc> char_poly(const FFElem& f);
// nullopt when f is regular at every place of the chart, otherwise a reason.
std::optional<std::string> regularity_failure(const FFElem& f, const Chart& chart);
bool is_regular_on(const FFElem& f, const Chart& chart);
bool is_unit_on(const FFElem& f, const Chart& chart);

struct ChartSpec {
  std::string name;
  Chart domain;
  FFElem n;  // generator of N on the chart
};

struct SurfaceChart {
  std::string name;
  Chart domain;
  FFElem n;
  FFElem t;
  FFElem correction;  // t = F*(n^{p-1}) f - F*(correction)
};

struct SurfaceOverlap {
  int a = 0, b = 0;
  FFElem u;  // n_a / n_b
  FFElem r;  // t_a = F*(u^{p-1}) t_b - F*(r)
};

struct SurfaceGluingData {
  CurvePtr curve;
  FFElem f;
  Divisor n_divisor;
  std::vector<SurfaceChart> charts;
  std::vector<SurfaceOverlap> overlaps;  // every ordered pair a != b
  std::string fiber_equation = "y^{p-1}z = x^p + F*(t_alpha) z^p";
};

// F*(h) = h^p on the F_p-model of the Frobenius twist.
FFElem frobenius_pullback(const FFElem& h);

// Default cover for N = m Q with Q affine: the complement of Q with generator 1, and the
// affine chart with generator (x - x_Q)^{-m}.
std::vector<ChartSpec> default_cover(const GeneralizedTangoCurve& g);

// Errors: PremiseViolated, NotExactOnChart, UnitFailure.
SurfaceGluingData build_surface(const GeneralizedTangoCurve& g, const std::vector<ChartSpec>& cover);

struct CocycleReport {
  bool ok = true;
  std::vector<std::string> violations;
};
CocycleReport validate_cocycle(const SurfaceGluingData& data);

struct FiberSample {
  std::string chart;
  std::string base;
  fp_t x = 0, y = 0, z = 0;
  bool smooth = true;
};
struct FiberProbeReport {
  std::size_t distinct_points = 0;
  std::size_t singular_points = 0;
  std::vector<FiberSample> samples;
  std::size_t singular_samples = 0;
};
// Jacobian criterion for y^{p-1}z - x^p - t z^p on every F_p-point of every fiber over a rational
// base place, then `count` samples drawn from them with the given seed.
FiberProbeReport fiber_smoothness_probe(const SurfaceGluingData& data, std::size_t count, std::uint64_t seed);

struct PathologyWitness {
  long long dim_lower = 0;
  long long dim_upper = 0;
  bool exact = false;
  std::vector<long long> pole_orders;  // achieved pole orders at the support point
  std::vector<FFElem> sections;        // basis of the sections found
  bool conclusion = false;             // dim > 0
};
// dim H^0(O(N)) by section search over monomials x^a y^b (|a|, |b| <= height) bounded by
// Riemann-Roch and Clifford; exact when the Weierstrass semigroup has g gaps.
PathologyWitness pathology_witness(const GeneralizedTangoCurve& g, int height);

// Text presentation and its parser.
std::string render_surface(const SurfaceGluingData& data);
SurfaceGluingData parse_surface(const std::string& text);

// "curve ...", "f ...", "N ...", "index ...", "nu ..." lines.
std::string render_generalized_tango(const GeneralizedTangoCurve& g);
GeneralizedTangoCurve parse_generalized_tango(const std::string& text);

}  // namespace dormant
