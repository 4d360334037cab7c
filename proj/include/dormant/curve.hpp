#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "dormant/ratfunc.hpp"

namespace dormant {

enum class CurveKind { P1Marked, Weierstrass, RaynaudPlane };

// A point of P^1(F_p): either x = value or the point at infinity.
struct Mark {
  bool infinite = false;
  fp_t x = 0;

  static Mark at(fp_t v) { return Mark{false, v}; }
  static Mark infinity() { return Mark{true, 0}; }
  std::string to_string() const;  // "3" or "inf"
  friend bool operator==(const Mark& a, const Mark& b) {
    return a.infinite == b.infinite && (a.infinite || a.x == b.x);
  }
};

class FFElem;

// Curve model together with its function field K = F_p(x)[y]/(m(y)).
// P1Marked: d = 1; Weierstrass y^2 = x^3 + ax + b: d = 2;
// RaynaudPlane x^{lp} - x y^{lp-1} - y z^{lp-1} = 0 in the chart z = 1: d = lp - 1.
class Curve : public std::enable_shared_from_this<Curve> {
 public:
  static std::shared_ptr<const Curve> p1(fp_t p, std::vector<Mark> marks);
  static std::shared_ptr<const Curve> weierstrass(fp_t p, long long a, long long b);
  static std::shared_ptr<const Curve> raynaud(fp_t p, int l);

  CurveKind kind() const noexcept { return kind_; }
  fp_t p() const noexcept { return p_; }
  fp_t a() const noexcept { return a_; }
  fp_t b() const noexcept { return b_; }
  int l() const noexcept { return l_; }
  int degree() const noexcept { return d_; }
  const std::vector<Mark>& marks() const noexcept { return marks_; }
  int genus() const;
  // "p1 p=5 marks=0,1,inf" and friends.
  std::string descriptor() const;

  FFElem zero() const;
  FFElem one() const;
  FFElem x() const;
  FFElem y() const;
  FFElem constant(long long c) const;
  FFElem from_ratfunc(const RatFunc& f) const;
  // dy/dx in K.
  FFElem dy() const;
  // w with eta = w dx, eta the fixed trivializing form of Omega:
  // dx on P^1, dx/y on Weierstrass, d(1/y) on Raynaud.
  FFElem eta() const;
  // Weierstrass cubic x^3 + ax + b.
  UPoly cubic() const;

  // Reduction data: y^(d+j) = (sum_i red_num[j][i] y^i) / red_den for j = 0..d-2.
  const std::vector<std::vector<UPoly>>& red_num() const noexcept { return red_num_; }
  const UPoly& red_den() const noexcept { return red_den_; }
  // Coefficients c_i of y^d = sum_i c_i y^i.
  const std::vector<RatFunc>& ypow_d() const noexcept { return ypow_d_; }

  // Inverse of the matrix expressing y^(ip) (i < d) in the basis y^i.
  const std::vector<std::vector<RatFunc>>& frob_basis_inverse() const { return frob_inv_; }
  const std::vector<std::vector<RatFunc>>& frob_basis() const { return frob_basis_; }

 private:
  Curve() = default;
  void init_field();
  CurveKind kind_ = CurveKind::P1Marked;
  fp_t p_ = 0;
  fp_t a_ = 0, b_ = 0;
  int l_ = 0;
  int d_ = 1;
  std::vector<Mark> marks_;
  std::vector<RatFunc> ypow_d_;
  std::vector<std::vector<UPoly>> red_num_;
  UPoly red_den_;
  std::vector<UPoly> dy_nums_;
  UPoly dy_den_;
  std::vector<UPoly> eta_nums_;
  UPoly eta_den_;
  std::vector<std::vector<RatFunc>> frob_basis_;
  std::vector<std::vector<RatFunc>> frob_inv_;
  friend class FFElem;
};

using CurvePtr = std::shared_ptr<const Curve>;

// Parses "p1 p=<p> marks=<a,b,...,inf>", "ell p=<p> a=<a> b=<b>", "raynaud p=<p> l=<l>".
CurvePtr parse_curve(const std::string& descriptor);

// Element of K as (sum_i nums[i] y^i) / den, den monic and coprime to the numerator content.
class FFElem {
 public:
  FFElem() = default;
  FFElem(CurvePtr curve, std::vector<UPoly> nums, UPoly den);

  const CurvePtr& curve() const noexcept { return curve_; }
  fp_t p() const { return curve_->p(); }
  const std::vector<UPoly>& nums() const noexcept { return nums_; }
  const UPoly& den() const noexcept { return den_; }
  // Coefficient of y^i as a reduced rational function.
  RatFunc component(int i) const;
  bool is_zero() const;
  bool is_constant() const;
  // Lies in F_p(x).
  bool in_base_field() const;

  FFElem operator-() const;
  friend FFElem operator+(const FFElem& a, const FFElem& b);
  friend FFElem operator-(const FFElem& a, const FFElem& b);
  friend FFElem operator*(const FFElem& a, const FFElem& b);
  friend FFElem operator/(const FFElem& a, const FFElem& b) { return a * b.inverse(); }
  FFElem& operator+=(const FFElem& o) { return *this = *this + o; }
  FFElem& operator-=(const FFElem& o) { return *this = *this - o; }
  FFElem& operator*=(const FFElem& o) { return *this = *this * o; }
  FFElem scaled(fp_t s) const;
  FFElem times(const RatFunc& f) const;
  // Throws ZeroDenominator on 0.
  FFElem inverse() const;
  FFElem pow(long long e) const;

  // d/dx
  FFElem derivative() const;
  // Substitution x -> x^p, y -> y^p (the Frobenius pullback over F_p).
  FFElem frobenius() const;
  // g with g^p = f, when f lies in K^p.
  std::optional<FFElem> pth_root() const;
  bool is_pth_power() const { return derivative().is_zero(); }

  friend bool operator==(const FFElem& a, const FFElem& b);
  friend bool operator!=(const FFElem& a, const FFElem& b) { return !(a == b); }

  // Components "num / den" joined by " | ".
  std::string to_string() const;

 private:
  static FFElem make(const CurvePtr& c, std::vector<UPoly> nums, UPoly den);
  CurvePtr curve_;
  std::vector<UPoly> nums_;
  UPoly den_;
};

FFElem parse_ffelem(const CurvePtr& curve, const std::string& text);

// Hasse invariant of a Weierstrass curve: coefficient of x^(p-1) in (x^3+ax+b)^((p-1)/2).
struct OrdinaryReport {
  bool ordinary;
  fp_t hasse;
};
OrdinaryReport is_ordinary(const Curve& curve);

}  // namespace dormant
