#pragma once

#include <map>
#include <string>
#include <vector>

#include "dormant/curve.hpp"
#include "dormant/series.hpp"

namespace dormant {

// An F_p-rational place of a shipped curve model.
// Affine: the point (x, y) of the working chart (y unused on P^1).
// AtInfinity: x = inf on P^1; [0:1:0] on Weierstrass; [x:1:0] on Raynaud (x holds X).
struct Place {
  enum class Kind { Affine, AtInfinity };
  Kind kind = Kind::Affine;
  fp_t x = 0;
  fp_t y = 0;

  static Place affine(fp_t x, fp_t y = 0) { return Place{Kind::Affine, x, y}; }
  static Place infinity(fp_t x = 0) { return Place{Kind::AtInfinity, x, 0}; }
  bool operator==(const Place& o) const { return kind == o.kind && x == o.x && y == o.y; }
};

// "x=3", "x=inf" on P^1; "[x:y:1]", "[0:1:0]", "[X:1:0]" on plane models.
std::string place_label(const Curve& curve, const Place& place);
Place parse_place(const Curve& curve, const std::string& label);
bool on_curve(const Curve& curve, const Place& place);

// All F_p-rational places, affine ones first in lexicographic order.
std::vector<Place> rational_places(const Curve& curve);

// Uniformizer expansions of the working coordinates x, y at a place.
class Branch {
 public:
  Branch(CurvePtr curve, Place place, std::string uniformizer, TruncSeries x, TruncSeries y, int prec)
      : curve_(std::move(curve)), place_(place), uniformizer_(std::move(uniformizer)), x_(std::move(x)),
        y_(std::move(y)), prec_(prec) {}

  const CurvePtr& curve() const noexcept { return curve_; }
  const Place& place() const noexcept { return place_; }
  std::string label() const { return place_label(*curve_, place_); }
  const std::string& uniformizer() const noexcept { return uniformizer_; }
  const TruncSeries& x() const noexcept { return x_; }
  const TruncSeries& y() const noexcept { return y_; }
  int precision() const noexcept { return prec_; }

  TruncSeries expand(const FFElem& f) const;
  // The form h dx as a series in dt.
  TruncSeries expand_form(const FFElem& h) const;

 private:
  CurvePtr curve_;
  Place place_;
  std::string uniformizer_;
  TruncSeries x_, y_;
  int prec_;
};

// Newton iteration on the chart equation; throws SingularPoint, NotOnCurve, NewtonStall.
Branch branch_at(const CurvePtr& curve, const Place& place, int prec);

// Starting precision 4 p (pole + g + 1), or DORMANT_PRECISION when set.
int start_precision(const Curve& curve, int pole_hint);
inline constexpr int kMaxPrecision = 1 << 16;

// Expansion with at least rel_prec known coefficients past the leading term (doubling policy).
TruncSeries series_expand(const FFElem& f, const Place& place, int rel_prec);

// Throw ZeroElement on zero input; precision is doubled until the leading term is known.
int valuation(const FFElem& f, const Place& place);
int form_valuation(const FFElem& h, const Place& place);

// Expansion of f (or of the form f dx) with every coefficient below `upto` known.
TruncSeries expand_upto(const FFElem& f, const Place& place, int upto, bool as_form);
// Residue of h dx at the place.
fp_t residue(const FFElem& h, const Place& place);

// Divisors keyed by place label.
using Divisor = std::map<std::string, long long>;
long long degree(const Divisor& d);
Divisor floor_div(const Divisor& d, long long p);
Divisor scaled(const Divisor& d, long long k);
Divisor add(const Divisor& a, const Divisor& b);
std::string to_string(const Divisor& d);
// Inverse of to_string; labels must name rational places of the curve.
Divisor parse_divisor(const Curve& curve, const std::string& text);

struct DivisorReport {
  Divisor divisor;
  long long degree = 0;
  bool complete = false;
};

// Divisor of h dx on the candidates; complete iff its degree is 2g - 2.
DivisorReport divisor_of_differential(const FFElem& h, const std::vector<Place>& candidates);
// Divisor of a function on the candidates; complete iff its degree is 0.
DivisorReport divisor_of_function(const FFElem& f, const std::vector<Place>& candidates);

}  // namespace dormant
