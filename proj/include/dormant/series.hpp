#pragma once

#include <string>
#include <vector>

#include "dormant/poly.hpp"

namespace dormant {

// Truncated Laurent series sum_{n >= ord} c_n t^n + O(t^prec).
// Normal form: the coefficient at ord is nonzero, or the series is O(t^prec)
// with no stored coefficients and ord == prec.
class TruncSeries {
 public:
  TruncSeries() : p_(0), ord_(0), prec_(0) {}
  // coeffs[i] is the coefficient of t^(ord + i); known below prec (zero-padded).
  TruncSeries(fp_t p, int ord, std::vector<fp_t> coeffs, int prec);

  static TruncSeries zero(fp_t p, int prec);
  static TruncSeries constant(fp_t p, fp_t c, int prec);
  // c t^n + O(t^prec)
  static TruncSeries monomial(fp_t p, fp_t c, int n, int prec);

  fp_t modulus() const noexcept { return p_; }
  int ord() const noexcept { return ord_; }
  int prec() const noexcept { return prec_; }
  // Known coefficients past the leading term.
  int rel_prec() const noexcept { return prec_ - ord_; }
  bool is_zero() const noexcept { return c_.empty(); }
  // Coefficient of t^n; throws InsufficientPrecision when n >= prec.
  fp_t coeff(int n) const;
  fp_t leading() const { return c_.empty() ? 0 : c_[0]; }
  const std::vector<fp_t>& coeffs() const noexcept { return c_; }

  TruncSeries operator-() const;
  friend TruncSeries operator+(const TruncSeries& a, const TruncSeries& b);
  friend TruncSeries operator-(const TruncSeries& a, const TruncSeries& b);
  friend TruncSeries operator*(const TruncSeries& a, const TruncSeries& b);
  // Throws InsufficientPrecision when b is zero to known precision.
  friend TruncSeries operator/(const TruncSeries& a, const TruncSeries& b);
  TruncSeries scaled(fp_t s) const;
  TruncSeries inverse() const;
  TruncSeries pow(int e) const;
  TruncSeries derivative() const;
  TruncSeries truncated(int prec) const;
  // Multiply by t^n.
  TruncSeries shifted(int n) const;

  // Agreement on the common range of known coefficients.
  bool agrees_with(const TruncSeries& o) const;

  std::string to_string() const;

 private:
  void normalize();
  fp_t p_;
  int ord_;
  int prec_;
  std::vector<fp_t> c_;
};

// f(s) for a polynomial f.
TruncSeries eval_poly(const UPoly& f, const TruncSeries& s);

// The local Cartier rule on series forms: sum a_n t^n dt  ->  sum_{n = -1 mod p} a_n t^((n+1)/p - 1) dt.
TruncSeries cartier_series(const TruncSeries& form);

}  // namespace dormant
