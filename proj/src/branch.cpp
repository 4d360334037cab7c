#include "dormant/branch.hpp"

#include <algorithm>
#include <cstdlib>
#include <sstream>

#include "dormant/error.hpp"

namespace dormant {

namespace {

// Bivariate polynomial in chart coordinates (u, v) as a list of terms c u^i v^j.
struct Term {
  int i, j;
  fp_t c;
};
using BiPoly = std::vector<Term>;

fp_t eval_bi(const BiPoly& g, fp_t u, fp_t v, fp_t p) {
  fp_t s = 0;
  for (const auto& t : g) s = fp_add(s, fp_mul(t.c, fp_mul(fp_pow(u, t.i, p), fp_pow(v, t.j, p), p), p), p);
  return s;
}

BiPoly partial(const BiPoly& g, bool in_u, fp_t p) {
  BiPoly r;
  for (const auto& t : g) {
    const int e = in_u ? t.i : t.j;
    const fp_t c = fp_mul(t.c, static_cast<fp_t>(e % p), p);
    if (e == 0 || c == 0) continue;
    r.push_back(in_u ? Term{t.i - 1, t.j, c} : Term{t.i, t.j - 1, c});
  }
  return r;
}

std::vector<TruncSeries> powers(const TruncSeries& s, int n, int prec) {
  std::vector<TruncSeries> pw;
  pw.push_back(TruncSeries::constant(s.modulus(), 1, prec));
  for (int k = 1; k <= n; ++k) pw.push_back(pw.back() * s);
  return pw;
}

TruncSeries eval_bi(const BiPoly& g, const TruncSeries& u, const TruncSeries& v, fp_t p, int prec) {
  int mi = 0, mj = 0;
  for (const auto& t : g) {
    mi = std::max(mi, t.i);
    mj = std::max(mj, t.j);
  }
  auto pu = powers(u, mi, prec), pv = powers(v, mj, prec);
  TruncSeries r = TruncSeries::zero(p, prec);
  for (const auto& t : g) r = r + (pu[t.i] * pv[t.j]).scaled(t.c);
  return r;
}

// Solves g(u, v) = 0 for the unknown coordinate given the other as a series.
TruncSeries newton_solve(const BiPoly& g, bool unknown_is_v, const TruncSeries& known, fp_t start, fp_t p,
                         int prec) {
  const BiPoly dg = partial(g, !unknown_is_v, p);
  TruncSeries s = TruncSeries::constant(p, start, prec);
  for (int iter = 0; iter < 64; ++iter) {
    TruncSeries val = unknown_is_v ? eval_bi(g, known, s, p, prec) : eval_bi(g, s, known, p, prec);
    if (val.is_zero() && val.prec() >= prec) return s;
    TruncSeries der = unknown_is_v ? eval_bi(dg, known, s, p, prec) : eval_bi(dg, s, known, p, prec);
    if (der.is_zero() || der.ord() != 0) raise(ErrorCode::NewtonStall, "derivative not a unit along the branch");
    s = (s - val / der).truncated(prec);
  }
  raise(ErrorCode::NewtonStall, "Newton iteration did not converge");
}

BiPoly affine_equation(const Curve& c) {
  const fp_t p = c.p();
  BiPoly g;
  if (c.kind() == CurveKind::Weierstrass) {
    // y^2 - x^3 - a x - b
    g.push_back({0, 2, 1});
    g.push_back({3, 0, fp_neg(1, p)});
    if (c.a()) g.push_back({1, 0, fp_neg(c.a(), p)});
    if (c.b()) g.push_back({0, 0, fp_neg(c.b(), p)});
  } else {
    // x^{lp} - x y^d - y
    const int lp = c.l() * static_cast<int>(p);
    g.push_back({lp, 0, 1});
    g.push_back({1, lp - 1, fp_neg(1, p)});
    g.push_back({0, 1, fp_neg(1, p)});
  }
  return g;
}

// Chart y = 1 with coordinates (X, Z) = (x/y, 1/y).
BiPoly infinity_equation(const Curve& c) {
  const fp_t p = c.p();
  BiPoly g;
  if (c.kind() == CurveKind::Weierstrass) {
    // Z - X^3 - a X Z^2 - b Z^3
    g.push_back({0, 1, 1});
    g.push_back({3, 0, fp_neg(1, p)});
    if (c.a()) g.push_back({1, 2, fp_neg(c.a(), p)});
    if (c.b()) g.push_back({0, 3, fp_neg(c.b(), p)});
  } else {
    // X^{lp} - X - Z^d
    const int lp = c.l() * static_cast<int>(p);
    g.push_back({lp, 0, 1});
    g.push_back({1, 0, fp_neg(1, p)});
    g.push_back({0, lp - 1, fp_neg(1, p)});
  }
  return g;
}

std::string coordinate_shift(const char* name, fp_t v) {
  return v == 0 ? std::string(name) : std::string(name) + "-" + std::to_string(v);
}

}  // namespace

std::string place_label(const Curve& curve, const Place& place) {
  if (curve.kind() == CurveKind::P1Marked)
    return place.kind == Place::Kind::AtInfinity ? "x=inf" : "x=" + std::to_string(place.x);
  if (place.kind == Place::Kind::Affine)
    return "[" + std::to_string(place.x) + ":" + std::to_string(place.y) + ":1]";
  return "[" + std::to_string(place.x) + ":1:0]";
}

Place parse_place(const Curve& curve, const std::string& label) {
  auto bad = [&]() -> Place { raise(ErrorCode::SyntaxError, "bad place label '" + label + "'"); };
  auto num = [&](const std::string& s) -> fp_t {
    if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos) bad();
    unsigned long long v = std::stoull(s);
    if (v >= curve.p()) raise(ErrorCode::SemanticError, "coordinate out of range in '" + label + "'");
    return static_cast<fp_t>(v);
  };
  Place pl;
  if (curve.kind() == CurveKind::P1Marked) {
    if (label.rfind("x=", 0) != 0) return bad();
    std::string v = label.substr(2);
    pl = v == "inf" ? Place::infinity() : Place::affine(num(v));
  } else {
    if (label.size() < 7 || label.front() != '[' || label.back() != ']') return bad();
    std::vector<std::string> parts;
    std::stringstream ss(label.substr(1, label.size() - 2));
    std::string item;
    while (std::getline(ss, item, ':')) parts.push_back(item);
    if (parts.size() != 3) return bad();
    if (parts[2] == "1") {
      pl = Place::affine(num(parts[0]), num(parts[1]));
    } else if (parts[2] == "0" && parts[1] == "1") {
      pl = Place::infinity(num(parts[0]));
    } else {
      return bad();
    }
  }
  if (!on_curve(curve, pl)) raise(ErrorCode::NotOnCurve, "place " + label + " is not on the curve");
  return pl;
}

bool on_curve(const Curve& curve, const Place& place) {
  const fp_t p = curve.p();
  if (place.x >= p || place.y >= p) return false;
  switch (curve.kind()) {
    case CurveKind::P1Marked: return place.y == 0;
    case CurveKind::Weierstrass:
      if (place.kind == Place::Kind::AtInfinity) return place.x == 0;
      return eval_bi(affine_equation(curve), place.x, place.y, p) == 0;
    case CurveKind::RaynaudPlane:
      if (place.kind == Place::Kind::AtInfinity) return eval_bi(infinity_equation(curve), place.x, 0, p) == 0;
      return eval_bi(affine_equation(curve), place.x, place.y, p) == 0;
  }
  return false;
}

std::vector<Place> rational_places(const Curve& curve) {
  const fp_t p = curve.p();
  std::vector<Place> out;
  if (curve.kind() == CurveKind::P1Marked) {
    for (fp_t a = 0; a < p; ++a) out.push_back(Place::affine(a));
    out.push_back(Place::infinity());
    return out;
  }
  const BiPoly g = affine_equation(curve);
  for (fp_t a = 0; a < p; ++a)
    for (fp_t b = 0; b < p; ++b)
      if (eval_bi(g, a, b, p) == 0) out.push_back(Place::affine(a, b));
  if (curve.kind() == CurveKind::Weierstrass) {
    out.push_back(Place::infinity(0));
  } else {
    const int lp = curve.l() * static_cast<int>(p);
    UPoly h = UPoly::monomial(p, 1, lp) - UPoly::x(p);
    for (fp_t r : rational_roots(h)) out.push_back(Place::infinity(r));
  }
  return out;
}

Branch branch_at(const CurvePtr& curve, const Place& place, int prec) {
  const Curve& c = *curve;
  const fp_t p = c.p();
  if (prec < 1) raise(ErrorCode::InvalidArgument, "precision must be positive");
  if (!on_curve(c, place)) raise(ErrorCode::NotOnCurve, "place is not on the curve");
  const TruncSeries t = TruncSeries::monomial(p, 1, 1, prec);
  if (c.kind() == CurveKind::P1Marked) {
    if (place.kind == Place::Kind::AtInfinity)
      return Branch(curve, place, "1/x", TruncSeries::monomial(p, 1, -1, prec), TruncSeries::zero(p, prec), prec);
    TruncSeries x = TruncSeries::constant(p, place.x, prec) + t;
    return Branch(curve, place, coordinate_shift("x", place.x), x, TruncSeries::zero(p, prec), prec);
  }
  const bool affine = place.kind == Place::Kind::Affine;
  const BiPoly g = affine ? affine_equation(c) : infinity_equation(c);
  const fp_t u0 = place.x;
  const fp_t v0 = affine ? place.y : 0;
  const fp_t gu = eval_bi(partial(g, true, p), u0, v0, p);
  const fp_t gv = eval_bi(partial(g, false, p), u0, v0, p);
  TruncSeries u, v;
  std::string name;
  if (gv != 0) {
    u = TruncSeries::constant(p, u0, prec) + t;
    v = newton_solve(g, true, u, v0, p, prec);
    name = affine ? coordinate_shift("x", u0) : (u0 ? "x/y-" + std::to_string(u0) : "x/y");
  } else if (gu != 0) {
    v = TruncSeries::constant(p, v0, prec) + t;
    u = newton_solve(g, false, v, u0, p, prec);
    name = affine ? coordinate_shift("y", v0) : "1/y";
  } else {
    raise(ErrorCode::SingularPoint, "both partial derivatives vanish at " + place_label(c, place));
  }
  if (affine) return Branch(curve, place, name, u, v, prec);
  // Back to the working chart: x = X/Z, y = 1/Z.
  TruncSeries zinv = v.inverse();
  return Branch(curve, place, name, u * zinv, zinv, prec);
}

TruncSeries Branch::expand(const FFElem& f) const {
  const fp_t p = curve_->p();
  if (f.curve() != curve_ && f.curve()->descriptor() != curve_->descriptor())
    raise(ErrorCode::CurveMismatch, "element and branch live on different curves");
  const int d = curve_->degree();
  TruncSeries num = TruncSeries::zero(p, std::max(prec_, x_.rel_prec()) + 1);
  bool first = true;
  TruncSeries ypow;
  for (int i = 0; i < d; ++i) {
    if (i == 1) ypow = y_;
    else if (i > 1) ypow = ypow * y_;
    const UPoly& ni = f.nums()[i];
    if (ni.is_zero()) continue;
    TruncSeries term = eval_poly(ni, x_);
    if (i > 0) term = term * ypow;
    num = first ? term : num + term;
    first = false;
  }
  if (first) return TruncSeries::zero(p, prec_);
  if (f.den().is_one()) return num;
  return num / eval_poly(f.den(), x_);
}

TruncSeries Branch::expand_form(const FFElem& h) const { return expand(h) * x_.derivative(); }

int start_precision(const Curve& curve, int pole_hint) {
  if (const char* env = std::getenv("DORMANT_PRECISION")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0 && v <= kMaxPrecision) return static_cast<int>(v);
  }
  long long n = 4LL * curve.p() * (std::max(pole_hint, 0) + curve.genus() + 1);
  return static_cast<int>(std::min<long long>(n, kMaxPrecision));
}

namespace {

template <class Fn>
TruncSeries with_doubling(const FFElem& f, const Place& place, int rel_prec, Fn expand) {
  if (f.is_zero()) raise(ErrorCode::ZeroElement, "valuation of the zero element");
  int prec = start_precision(*f.curve(), 0);
  for (;;) {
    Branch br = branch_at(f.curve(), place, prec);
    TruncSeries s = expand(br, f);
    if (!s.is_zero() && s.rel_prec() >= rel_prec) return s.truncated(s.ord() + rel_prec);
    if (prec >= kMaxPrecision)
      raise(ErrorCode::InsufficientPrecision, "expansion at " + place_label(*f.curve(), place) + " needs more than 2^16 terms");
    prec = std::min(prec * 2, kMaxPrecision);
  }
}

}  // namespace

TruncSeries series_expand(const FFElem& f, const Place& place, int rel_prec) {
  return with_doubling(f, place, std::max(rel_prec, 1), [](const Branch& b, const FFElem& g) { return b.expand(g); });
}

int valuation(const FFElem& f, const Place& place) { return series_expand(f, place, 1).ord(); }

int form_valuation(const FFElem& h, const Place& place) {
  return with_doubling(h, place, 1, [](const Branch& b, const FFElem& g) { return b.expand_form(g); }).ord();
}

TruncSeries expand_upto(const FFElem& f, const Place& place, int upto, bool as_form) {
  const fp_t p = f.curve()->p();
  if (f.is_zero()) return TruncSeries::zero(p, upto);
  int prec = start_precision(*f.curve(), 0);
  for (;;) {
    Branch br = branch_at(f.curve(), place, prec);
    TruncSeries s = as_form ? br.expand_form(f) : br.expand(f);
    if (s.prec() >= upto) return s.truncated(upto);
    if (prec >= kMaxPrecision)
      raise(ErrorCode::InsufficientPrecision, "expansion at " + place_label(*f.curve(), place) + " needs more than 2^16 terms");
    prec = std::min(std::max(prec * 2, prec + 2 * (upto - s.prec())), kMaxPrecision);
  }
}

fp_t residue(const FFElem& h, const Place& place) { return expand_upto(h, place, 0, true).coeff(-1); }

long long degree(const Divisor& d) {
  long long s = 0;
  for (const auto& [k, v] : d) s += v;
  return s;
}

Divisor floor_div(const Divisor& d, long long p) {
  Divisor r;
  for (const auto& [k, v] : d) {
    long long q = v / p;
    if (v % p != 0 && v < 0) --q;
    if (q != 0) r[k] = q;
  }
  return r;
}

Divisor scaled(const Divisor& d, long long k) {
  Divisor r;
  if (k == 0) return r;
  for (const auto& [key, v] : d) r[key] = v * k;
  return r;
}

Divisor add(const Divisor& a, const Divisor& b) {
  Divisor r = a;
  for (const auto& [k, v] : b) {
    long long s = (r.count(k) ? r[k] : 0) + v;
    if (s == 0) r.erase(k);
    else r[k] = s;
  }
  return r;
}

std::string to_string(const Divisor& d) {
  if (d.empty()) return "0";
  std::string s;
  for (const auto& [k, v] : d) {
    if (!s.empty()) s += " + ";
    s += std::to_string(v) + "*" + k;
  }
  return s;
}

Divisor parse_divisor(const Curve& curve, const std::string& text) {
  Divisor d;
  std::string body = text;
  auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t");
    const auto e = s.find_last_not_of(" \t");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
  };
  body = trim(body);
  if (body == "0") return d;
  std::stringstream ss(body);
  std::string term;
  while (std::getline(ss, term, '+')) {
    term = trim(term);
    const auto star = term.find('*');
    if (star == std::string::npos) raise(ErrorCode::SyntaxError, "divisor term '" + term + "' lacks '*'");
    long long c = 0;
    try {
      std::size_t used = 0;
      c = std::stoll(term.substr(0, star), &used);
      if (used != star) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      raise(ErrorCode::SyntaxError, "bad coefficient in '" + term + "'");
    }
    const std::string label = place_label(curve, parse_place(curve, trim(term.substr(star + 1))));
    d[label] += c;
    if (d[label] == 0) d.erase(label);
  }
  return d;
}

DivisorReport divisor_of_differential(const FFElem& h, const std::vector<Place>& candidates) {
  if (h.is_zero()) raise(ErrorCode::ZeroElement, "divisor of the zero form");
  DivisorReport rep;
  for (const auto& pl : candidates) {
    int v = form_valuation(h, pl);
    if (v != 0) rep.divisor[place_label(*h.curve(), pl)] = v;
  }
  rep.degree = degree(rep.divisor);
  rep.complete = rep.degree == 2LL * h.curve()->genus() - 2;
  return rep;
}

DivisorReport divisor_of_function(const FFElem& f, const std::vector<Place>& candidates) {
  if (f.is_zero()) raise(ErrorCode::ZeroElement, "divisor of the zero function");
  DivisorReport rep;
  for (const auto& pl : candidates) {
    int v = valuation(f, pl);
    if (v != 0) rep.divisor[place_label(*f.curve(), pl)] = v;
  }
  rep.degree = degree(rep.divisor);
  rep.complete = rep.degree == 0;
  return rep;
}

}  // namespace dormant
