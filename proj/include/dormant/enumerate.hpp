#pragma once

#include <boost/rational.hpp>
#include <string>
#include <vector>

#include "dormant/connection.hpp"

namespace dormant {

using Rational = boost::rational<long long>;

// Flat connections on Omega_log (trivialized by eta) with prescribed monodromy.
struct EnumerationReport {
  std::string curve_tag;
  std::vector<fp_t> monodromy;
  long long flat_count = 0;
  std::vector<LogConnection> flat_list;
  bool pretango_checked = false;
  long long pretango_count = 0;
  std::vector<LogConnection> pretango_list;
  bool admissible = false;
  Rational formula_value;
};

struct EmptinessVerdict {
  Rational value;
  bool must_be_empty = false;
};
// 2g - 2 + (2g - 2 + r + sum tau^{-1}(-eps_i)) / p; empty when negative.
EmptinessVerdict emptiness_oracle(int g, int r, const std::vector<fp_t>& eps, fp_t p);

// Linear ansatz for A with poles bounded at marks and infinity, solved once per curve;
// flatness is decided by operator powering only.
class FlatEnumerator {
 public:
  explicit FlatEnumerator(CurvePtr curve);
  const CurvePtr& curve() const noexcept { return curve_; }
  // Throws InvalidArgument on a wrong monodromy length.
  EnumerationReport enumerate(const std::vector<fp_t>& mu, bool with_pretango) const;

 private:
  struct PlaceRows {
    Place place;
    bool marked = false;
    std::size_t mark_index = 0;
    long long frame_order = 0;
    std::vector<std::vector<fp_t>> polar;  // polar[j-1][b]: coefficient of t^{-j} in basis b dx
  };
  CurvePtr curve_;
  std::vector<FFElem> basis_;
  std::vector<PlaceRows> places_;
};

// Throws UnsupportedCurve on Raynaud curves.
EnumerationReport enumerate_flat(const CurvePtr& curve, const std::vector<fp_t>& mu);
// Pre-Tango filter at monodromy -eps.
EnumerationReport count_pretango(const CurvePtr& curve, const std::vector<fp_t>& eps);

// All monodromy vectors in lexicographic order.
std::vector<std::vector<fp_t>> all_monodromy_vectors(fp_t p, std::size_t r);
// Reports for every vector, computed on up to `threads` workers; output order is lexicographic in mu.
std::vector<EnumerationReport> sweep(const CurvePtr& curve, bool with_pretango, unsigned threads);

// "flat=<k> pretango=<m> admissible=<bool> formula=<q>"
std::string machine_line(const EnumerationReport& r);
std::string to_string(const Rational& q);

}  // namespace dormant
