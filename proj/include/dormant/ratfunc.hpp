#pragma once

#include <optional>
#include <string>

#include "dormant/poly.hpp"

namespace dormant {

// Reduced fraction num/den over F_p with monic denominator; equality is structural.
class RatFunc {
 public:
  RatFunc() = default;
  explicit RatFunc(fp_t p) : num_(p), den_(UPoly::constant(p, 1)) {}
  explicit RatFunc(const UPoly& poly) : num_(poly), den_(UPoly::constant(poly.modulus(), 1)) {}

  static RatFunc constant(fp_t p, long long c) { return RatFunc(UPoly::constant(p, c)); }
  static RatFunc x(fp_t p) { return RatFunc(UPoly::x(p)); }
  // Canonical form of num/den; throws ZeroDenominator when den = 0.
  static RatFunc normalize(const UPoly& num, const UPoly& den);
  // (x - a)^n for any integer n.
  static RatFunc linear_power(fp_t p, fp_t a, int n);

  fp_t modulus() const noexcept { return den_.modulus(); }
  const UPoly& num() const noexcept { return num_; }
  const UPoly& den() const noexcept { return den_; }
  bool is_zero() const noexcept { return num_.is_zero(); }
  bool is_polynomial() const noexcept { return den_.is_one(); }
  bool is_constant() const noexcept { return den_.is_one() && num_.is_constant(); }

  RatFunc operator-() const;
  friend RatFunc operator+(const RatFunc& a, const RatFunc& b);
  friend RatFunc operator-(const RatFunc& a, const RatFunc& b);
  friend RatFunc operator*(const RatFunc& a, const RatFunc& b);
  friend RatFunc operator/(const RatFunc& a, const RatFunc& b);
  RatFunc& operator+=(const RatFunc& o) { return *this = *this + o; }
  RatFunc& operator-=(const RatFunc& o) { return *this = *this - o; }
  RatFunc& operator*=(const RatFunc& o) { return *this = *this * o; }
  RatFunc scaled(fp_t s) const;
  RatFunc inverse() const;
  RatFunc pow(long long e) const;

  RatFunc derivative() const;
  // g with g^p = f when f lies in F_p(x)^p.
  std::optional<RatFunc> pth_root() const;
  // f(x^p), which equals f^p over F_p.
  RatFunc frobenius() const;

  friend bool operator==(const RatFunc& a, const RatFunc& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend bool operator!=(const RatFunc& a, const RatFunc& b) { return !(a == b); }

  // "num / den"
  std::string to_string() const;

 private:
  RatFunc(UPoly n, UPoly d, bool) : num_(std::move(n)), den_(std::move(d)) {}
  UPoly num_;
  UPoly den_;
};

RatFunc parse_ratfunc(fp_t p, const std::string& text);

}  // namespace dormant
