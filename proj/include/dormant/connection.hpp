#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dormant/branch.hpp"
#include "dormant/curve.hpp"

namespace dormant {

// A line bundle word Omega_log^omega (x) O(twist), trivialized by section * eta^omega,
// where eta is the curve's fixed form and section a nonzero rational function.
// Its trivializing section has order omega (v(eta) + [marked]) + twist + v(section) at each place.
struct LineLabel {
  int omega = 0;
  Divisor twist;
  std::optional<FFElem> section;

  static LineLabel trivial() { return {}; }
  static LineLabel omega_log() { return LineLabel{1, {}, std::nullopt}; }
  static LineLabel tangent_log() { return LineLabel{-1, {}, std::nullopt}; }
  bool is_omega_log() const { return omega == 1 && twist.empty() && !section; }
};
// Structural equality; a missing section equals the section 1.
bool operator==(const LineLabel& a, const LineLabel& b);
inline bool operator!=(const LineLabel& a, const LineLabel& b) { return !(a == b); }

// Direct sum of line words; the trivialization is the sum of their sections.
struct BundleLabel {
  std::vector<LineLabel> summands;

  static BundleLabel line(LineLabel l) { return BundleLabel{{std::move(l)}}; }
  int rank() const { return static_cast<int>(summands.size()); }
  friend bool operator==(const BundleLabel& a, const BundleLabel& b) { return a.summands == b.summands; }
};

// "O", "Omega_log", "T_log^2", "O(3@x=0,-1@x=inf)", tensor words joined by '*',
// summands joined by '+'. Sections are not part of the text form.
std::string to_string(const BundleLabel& b);
BundleLabel parse_bundle_label(const Curve& curve, const std::string& text);

// Places of the curve marks (P^1 only; other models carry no marks).
std::vector<Place> mark_places(const Curve& curve);
// Order of the trivializing section of a line word at a place.
long long section_order(const CurvePtr& curve, const LineLabel& l, const Place& place);
// Degree of the line word.
long long label_degree(const Curve& curve, const LineLabel& l);

// Square matrix over K, row-major.
class FFMatrix {
 public:
  FFMatrix() = default;
  FFMatrix(const CurvePtr& c, int n);
  static FFMatrix identity(const CurvePtr& c, int n);
  int n() const noexcept { return n_; }
  FFElem& operator()(int i, int j) { return e_[i * n_ + j]; }
  const FFElem& operator()(int i, int j) const { return e_[i * n_ + j]; }
  bool is_zero() const;
  friend FFMatrix operator+(const FFMatrix& a, const FFMatrix& b);
  friend FFMatrix operator-(const FFMatrix& a, const FFMatrix& b);
  friend FFMatrix operator*(const FFMatrix& a, const FFMatrix& b);
  friend bool operator==(const FFMatrix& a, const FFMatrix& b) { return a.n_ == b.n_ && a.e_ == b.e_; }
  FFMatrix derivative() const;
  FFMatrix transpose() const;
  FFMatrix operator-() const;

 private:
  int n_ = 0;
  std::vector<FFElem> e_;
};

// nabla = d + A dx acting on column vectors of the trivialized bundle.
class LogConnection {
 public:
  LogConnection(CurvePtr curve, FFMatrix a, BundleLabel label);
  static LogConnection rank_one(const CurvePtr& curve, const FFElem& a, LineLabel label);

  const CurvePtr& curve() const noexcept { return curve_; }
  int rank() const noexcept { return a_.n(); }
  const FFMatrix& matrix() const noexcept { return a_; }
  const FFElem& entry(int i, int j) const { return a_(i, j); }
  const BundleLabel& label() const noexcept { return label_; }

  // Local log-connection check at every F_p-rational place and at the affine denominators;
  // throws UndeclaredPoleDetected.
  void validate() const;

  friend bool operator==(const LogConnection& a, const LogConnection& b) {
    return a.curve_ == b.curve_ && a.a_ == b.a_ && a.label_ == b.label_;
  }

 private:
  CurvePtr curve_;
  FFMatrix a_;
  BundleLabel label_;
};

// Coefficient of (dx)^p: zeroth-order part of (d/dx + A)^p.
// Rank 1 uses a^p + a^{(p-1)}; higher rank uses operator powering.
FFMatrix p_curvature(const LogConnection& c);
FFElem p_curvature_rank1(const FFElem& a);
FFMatrix p_curvature_operator_power(const FFMatrix& a);

// Residue matrices in the local frame at each mark, row-major n x n per mark.
using ResidueMatrix = std::vector<fp_t>;
std::vector<ResidueMatrix> monodromy(const LogConnection& c);
// Residue data at an arbitrary place.
ResidueMatrix monodromy_at(const LogConnection& c, const Place& place);
// Plain residues of the entries of A dx at the marks (no bundle correction).
std::vector<ResidueMatrix> raw_residues(const LogConnection& c);

// Rank 1: the value of Psi on the log derivation at each mark equals mu^p - mu.
bool residue_pcurvature_identity(const LogConnection& c);

// The canonical connection on F^*O(descent) = O(p descent), trivialized by s: A = dlog s.
LogConnection canonical_connection(const CurvePtr& curve, const Divisor& descent, const FFElem& s);

// u != 0 with u' + a u = 0 for a flat rank-1 connection; NotFlat otherwise.
FFElem horizontal_generator(const LogConnection& c);
// The same for rank 1 given by a, without label bookkeeping.
FFElem horizontal_generator(const FFElem& a);

// Descended line bundle on the Frobenius twist of a flat rank-1 connection.
// The class is carried by a horizontal rational section; the divisor is its restriction to
// rational places after the +mu shift, divided by p.
struct DescentClass {
  FFElem horizontal;   // u with nabla(u e) = 0, e the trivializing section
  Divisor divisor;     // rational-place part of the descended divisor
  long long degree = 0;
  std::vector<long long> shift;  // tau^{-1}(mu_i) per mark
};
DescentClass frobenius_descent(const LogConnection& c);
// Same class: equal labels and horizontal sections differing by a p-th power.
bool same_descent_class(const DescentClass& a, const DescentClass& b);

LogConnection tensor(const LogConnection& a, const LogConnection& b);
LogConnection dual(const LogConnection& c);

// tau^{-1}: F_p -> {0, ..., p-1}, and its inverse.
inline long long tau_inv(fp_t mu) { return static_cast<long long>(mu); }
inline fp_t tau(long long n, fp_t p) { return fp_from_int(n, p); }

}  // namespace dormant
