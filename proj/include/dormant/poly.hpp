#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dormant/fp.hpp"

namespace dormant {

// Degree of a polynomial; the zero polynomial carries the MinusInfinity kind.
class Degree {
 public:
  enum class Kind { MinusInfinity, Finite };

  static Degree minus_infinity() { return Degree(Kind::MinusInfinity, 0); }
  static Degree finite(int d) { return Degree(Kind::Finite, d); }

  Kind kind() const noexcept { return kind_; }
  bool is_minus_infinity() const noexcept { return kind_ == Kind::MinusInfinity; }
  // Throws InvalidArgument on the MinusInfinity sentinel.
  int value() const;

  friend bool operator==(const Degree& a, const Degree& b) {
    return a.kind_ == b.kind_ && a.value_ == b.value_;
  }
  friend bool operator<(const Degree& a, const Degree& b);

 private:
  Degree(Kind k, int v) : kind_(k), value_(v) {}
  Kind kind_;
  int value_;
};

// Dense univariate polynomial over F_p, coefficients ascending, no trailing zeros.
class UPoly {
 public:
  UPoly() : p_(0) {}
  explicit UPoly(fp_t p) : p_(p) {}
  UPoly(fp_t p, std::vector<fp_t> coeffs);

  static UPoly constant(fp_t p, long long c);
  static UPoly monomial(fp_t p, fp_t c, int n);
  static UPoly x(fp_t p) { return monomial(p, 1, 1); }
  // Coefficients given as signed integers, reduced mod p.
  static UPoly from_ints(fp_t p, const std::vector<long long>& coeffs);

  fp_t modulus() const noexcept { return p_; }
  const std::vector<fp_t>& coeffs() const noexcept { return c_; }
  bool is_zero() const noexcept { return c_.empty(); }
  bool is_one() const noexcept { return c_.size() == 1 && c_[0] == 1; }
  bool is_constant() const noexcept { return c_.size() <= 1; }
  Degree degree() const;
  // Number of stored coefficients (degree + 1, or 0 for the zero polynomial).
  int size() const noexcept { return static_cast<int>(c_.size()); }
  fp_t coeff(int i) const { return i >= 0 && i < size() ? c_[i] : 0; }
  fp_t leading() const { return c_.empty() ? 0 : c_.back(); }
  // Lowest exponent with a nonzero coefficient; -1 for zero.
  int low_order() const;

  UPoly operator-() const;
  UPoly& operator+=(const UPoly& o);
  UPoly& operator-=(const UPoly& o);
  friend UPoly operator+(UPoly a, const UPoly& b) { return a += b; }
  friend UPoly operator-(UPoly a, const UPoly& b) { return a -= b; }
  friend UPoly operator*(const UPoly& a, const UPoly& b);
  UPoly scaled(fp_t s) const;
  UPoly shifted(int n) const;  // multiply by x^n, n >= 0
  UPoly pow(unsigned e) const;

  // Euclidean division; throws ZeroDenominator when b = 0.
  static std::pair<UPoly, UPoly> divmod(const UPoly& a, const UPoly& b);
  friend UPoly operator/(const UPoly& a, const UPoly& b) { return divmod(a, b).first; }
  friend UPoly operator%(const UPoly& a, const UPoly& b) { return divmod(a, b).second; }

  UPoly monic() const;
  UPoly derivative() const;
  fp_t eval(fp_t x) const;
  // f(x^k)
  UPoly inflate(int k) const;
  // g with g^p = f, if every exponent is divisible by p.
  std::optional<UPoly> pth_root() const;
  // f(g)
  UPoly compose(const UPoly& g) const;

  friend bool operator==(const UPoly& a, const UPoly& b) { return a.p_ == b.p_ && a.c_ == b.c_; }
  friend bool operator!=(const UPoly& a, const UPoly& b) { return !(a == b); }

  std::string to_string() const;

 private:
  void trim();
  fp_t p_;
  std::vector<fp_t> c_;
};

// Monic gcd (zero if both are zero).
UPoly gcd(const UPoly& a, const UPoly& b);

// Raw coefficient-vector product; Karatsuba above the threshold.
std::vector<fp_t> poly_mul_vec(const std::vector<fp_t>& a, const std::vector<fp_t>& b, fp_t p);
std::vector<fp_t> poly_mul_schoolbook(const std::vector<fp_t>& a, const std::vector<fp_t>& b, fp_t p);

inline constexpr std::size_t kKaratsubaThreshold = 64;

// Roots in F_p (with multiplicity ignored), ascending.
std::vector<fp_t> rational_roots(const UPoly& f);

UPoly parse_upoly(fp_t p, const std::string& text);

}  // namespace dormant
