#include "dormant/ratfunc.hpp"

#include "dormant/error.hpp"

namespace dormant {

RatFunc RatFunc::normalize(const UPoly& num, const UPoly& den) {
  if (den.is_zero()) raise(ErrorCode::ZeroDenominator, "rational function with zero denominator");
  const fp_t p = den.modulus();
  if (num.is_zero()) return RatFunc(UPoly(p), UPoly::constant(p, 1), true);
  UPoly g = gcd(num, den);
  UPoly n = num, d = den;
  if (!g.is_one()) {
    n = n / g;
    d = d / g;
  }
  const fp_t inv = fp_inv(d.leading(), p);
  return RatFunc(n.scaled(inv), d.scaled(inv), true);
}

RatFunc RatFunc::linear_power(fp_t p, fp_t a, int n) {
  UPoly l(p, {fp_neg(a % p, p), 1});
  if (n >= 0) return RatFunc(l.pow(n));
  return RatFunc(UPoly::constant(p, 1), l.pow(-n), true);
}

RatFunc RatFunc::operator-() const { return RatFunc(-num_, den_, true); }

RatFunc operator+(const RatFunc& a, const RatFunc& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  if (a.den_ == b.den_) {
    if (a.den_.is_one()) return RatFunc(a.num_ + b.num_, a.den_, true);
    return RatFunc::normalize(a.num_ + b.num_, a.den_);
  }
  if (a.den_.is_one()) return RatFunc(a.num_ * b.den_ + b.num_, b.den_, true);
  if (b.den_.is_one()) return RatFunc(a.num_ + b.num_ * a.den_, a.den_, true);
  UPoly g = gcd(a.den_, b.den_);
  if (g.is_one())
    return RatFunc::normalize(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
  UPoly da = a.den_ / g, db = b.den_ / g;
  return RatFunc::normalize(a.num_ * db + b.num_ * da, a.den_ * db);
}

RatFunc operator-(const RatFunc& a, const RatFunc& b) { return a + (-b); }

RatFunc operator*(const RatFunc& a, const RatFunc& b) {
  if (a.is_zero()) return a;
  if (b.is_zero()) return b;
  if (a.den_.is_one() && b.den_.is_one()) return RatFunc(a.num_ * b.num_, a.den_, true);
  // Cross-cancel so the product is already reduced.
  UPoly g1 = gcd(a.num_, b.den_);
  UPoly g2 = gcd(b.num_, a.den_);
  UPoly n1 = g1.is_one() ? a.num_ : a.num_ / g1;
  UPoly d2 = g1.is_one() ? b.den_ : b.den_ / g1;
  UPoly n2 = g2.is_one() ? b.num_ : b.num_ / g2;
  UPoly d1 = g2.is_one() ? a.den_ : a.den_ / g2;
  UPoly n = n1 * n2, d = d1 * d2;
  const fp_t p = d.modulus();
  const fp_t inv = fp_inv(d.leading(), p);
  return RatFunc(n.scaled(inv), d.scaled(inv), true);
}

RatFunc operator/(const RatFunc& a, const RatFunc& b) { return a * b.inverse(); }

RatFunc RatFunc::scaled(fp_t s) const {
  if (s % modulus() == 0) return RatFunc(modulus());
  return RatFunc(num_.scaled(s), den_, true);
}

RatFunc RatFunc::inverse() const {
  if (is_zero()) raise(ErrorCode::ZeroDenominator, "inverse of zero rational function");
  const fp_t inv = fp_inv(num_.leading(), modulus());
  return RatFunc(den_.scaled(inv), num_.scaled(inv), true);
}

RatFunc RatFunc::pow(long long e) const {
  if (e < 0) return inverse().pow(-e);
  // num and den stay coprime under powers.
  return RatFunc(num_.pow(static_cast<unsigned>(e)), den_.pow(static_cast<unsigned>(e)), true);
}

RatFunc RatFunc::derivative() const {
  if (den_.is_one()) return RatFunc(num_.derivative());
  return normalize(num_.derivative() * den_ - num_ * den_.derivative(), den_ * den_);
}

std::optional<RatFunc> RatFunc::pth_root() const {
  auto n = num_.pth_root();
  if (!n) return std::nullopt;
  auto d = den_.pth_root();
  if (!d) return std::nullopt;
  return RatFunc(*n, *d, true);
}

RatFunc RatFunc::frobenius() const {
  const int p = static_cast<int>(modulus());
  return RatFunc(num_.inflate(p), den_.inflate(p), true);
}

std::string RatFunc::to_string() const { return num_.to_string() + " / " + den_.to_string(); }

RatFunc parse_ratfunc(fp_t p, const std::string& text) {
  auto slash = text.find('/');
  if (slash == std::string::npos) return RatFunc(parse_upoly(p, text));
  if (text.find('/', slash + 1) != std::string::npos)
    raise(ErrorCode::SyntaxError, "more than one '/' in rational function");
  UPoly n = parse_upoly(p, text.substr(0, slash));
  UPoly d = parse_upoly(p, text.substr(slash + 1));
  if (d.is_zero()) raise(ErrorCode::SemanticError, "zero denominator");
  return RatFunc::normalize(n, d);
}

}  // namespace dormant
