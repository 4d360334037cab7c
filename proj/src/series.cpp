#include "dormant/series.hpp"

#include <algorithm>
#include <sstream>

#include "dormant/error.hpp"

namespace dormant {

namespace {

int floor_div(int a, int b) {
  int q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

}  // namespace

TruncSeries::TruncSeries(fp_t p, int ord, std::vector<fp_t> coeffs, int prec)
    : p_(p), ord_(ord), prec_(prec), c_(std::move(coeffs)) {
  if (prec_ < ord_) prec_ = ord_;
  c_.resize(prec_ - ord_, 0);
  for (auto& v : c_) v %= p_;
  normalize();
}

void TruncSeries::normalize() {
  std::size_t lead = 0;
  while (lead < c_.size() && c_[lead] == 0) ++lead;
  if (lead == c_.size()) {
    c_.clear();
    ord_ = prec_;
    return;
  }
  if (lead) {
    c_.erase(c_.begin(), c_.begin() + lead);
    ord_ += static_cast<int>(lead);
  }
}

TruncSeries TruncSeries::zero(fp_t p, int prec) { return TruncSeries(p, prec, {}, prec); }

TruncSeries TruncSeries::constant(fp_t p, fp_t c, int prec) { return monomial(p, c, 0, prec); }

TruncSeries TruncSeries::monomial(fp_t p, fp_t c, int n, int prec) {
  if (prec <= n) return zero(p, prec);
  return TruncSeries(p, n, {c}, prec);
}

fp_t TruncSeries::coeff(int n) const {
  if (n >= prec_) raise(ErrorCode::InsufficientPrecision, "coefficient beyond known precision");
  if (n < ord_) return 0;
  return c_[n - ord_];
}

TruncSeries TruncSeries::operator-() const {
  TruncSeries r = *this;
  for (auto& v : r.c_) v = fp_neg(v, p_);
  return r;
}

TruncSeries operator+(const TruncSeries& a, const TruncSeries& b) {
  const fp_t p = a.p_ ? a.p_ : b.p_;
  const int prec = std::min(a.prec_, b.prec_);
  const int ord = std::min(a.ord_, b.ord_);
  if (ord >= prec) return TruncSeries::zero(p, prec);
  std::vector<fp_t> v(prec - ord, 0);
  for (std::size_t i = 0; i < a.c_.size(); ++i) {
    int n = a.ord_ + static_cast<int>(i);
    if (n >= prec) break;
    v[n - ord] = a.c_[i];
  }
  for (std::size_t i = 0; i < b.c_.size(); ++i) {
    int n = b.ord_ + static_cast<int>(i);
    if (n >= prec) break;
    v[n - ord] = fp_add(v[n - ord], b.c_[i], p);
  }
  return TruncSeries(p, ord, std::move(v), prec);
}

TruncSeries operator-(const TruncSeries& a, const TruncSeries& b) { return a + (-b); }

TruncSeries operator*(const TruncSeries& a, const TruncSeries& b) {
  const fp_t p = a.p_ ? a.p_ : b.p_;
  const int prec = std::min(a.prec_ + b.ord_, b.prec_ + a.ord_);
  const int ord = a.ord_ + b.ord_;
  if (a.is_zero() || b.is_zero() || ord >= prec) return TruncSeries::zero(p, prec);
  const int len = prec - ord;
  const int la = std::min<int>(a.c_.size(), len), lb = std::min<int>(b.c_.size(), len);
  std::vector<fp_t> va(a.c_.begin(), a.c_.begin() + la), vb(b.c_.begin(), b.c_.begin() + lb);
  std::vector<fp_t> prod = poly_mul_vec(va, vb, p);
  prod.resize(len, 0);
  return TruncSeries(p, ord, std::move(prod), prec);
}

TruncSeries TruncSeries::inverse() const {
  if (is_zero()) raise(ErrorCode::InsufficientPrecision, "inverting a series that is zero to known precision");
  const int r = rel_prec();
  std::vector<fp_t> inv(r, 0);
  const fp_t i0 = fp_inv(c_[0], p_);
  inv[0] = i0;
  for (int k = 1; k < r; ++k) {
    std::uint64_t s = 0;
    for (int j = 1; j <= k && j < static_cast<int>(c_.size()); ++j) {
      s += static_cast<std::uint64_t>(c_[j]) * inv[k - j] % p_;
    }
    inv[k] = fp_neg(fp_mul(static_cast<fp_t>(s % p_), i0, p_), p_);
  }
  return TruncSeries(p_, -ord_, std::move(inv), -ord_ + r);
}

TruncSeries operator/(const TruncSeries& a, const TruncSeries& b) { return a * b.inverse(); }

TruncSeries TruncSeries::scaled(fp_t s) const {
  TruncSeries r = *this;
  for (auto& v : r.c_) v = fp_mul(v, s % p_, p_);
  r.normalize();
  return r;
}

TruncSeries TruncSeries::pow(int e) const {
  if (e < 0) return inverse().pow(-e);
  TruncSeries r = constant(p_, 1, is_zero() ? prec_ : rel_prec());
  TruncSeries b = *this;
  while (e) {
    if (e & 1) r = r * b;
    e >>= 1;
    if (e) b = b * b;
  }
  return r;
}

TruncSeries TruncSeries::derivative() const {
  if (is_zero()) return zero(p_, prec_ - 1);
  std::vector<fp_t> v(c_.size());
  for (std::size_t i = 0; i < c_.size(); ++i) {
    long long n = ord_ + static_cast<long long>(i);
    v[i] = fp_mul(c_[i], fp_from_int(n, p_), p_);
  }
  return TruncSeries(p_, ord_ - 1, std::move(v), prec_ - 1);
}

TruncSeries TruncSeries::truncated(int prec) const {
  if (prec >= prec_) return *this;
  if (prec <= ord_) return zero(p_, prec);
  return TruncSeries(p_, ord_, std::vector<fp_t>(c_.begin(), c_.begin() + (prec - ord_)), prec);
}

TruncSeries TruncSeries::shifted(int n) const {
  TruncSeries r = *this;
  r.ord_ += n;
  r.prec_ += n;
  return r;
}

bool TruncSeries::agrees_with(const TruncSeries& o) const {
  const int prec = std::min(prec_, o.prec_);
  const int lo = std::min(ord_, o.ord_);
  for (int n = lo; n < prec; ++n)
    if (coeff(n) != o.coeff(n)) return false;
  return true;
}

std::string TruncSeries::to_string() const {
  std::ostringstream os;
  bool first = true;
  for (std::size_t i = 0; i < c_.size(); ++i) {
    if (!c_[i]) continue;
    if (!first) os << " + ";
    os << c_[i] << "*t^" << (ord_ + static_cast<int>(i));
    first = false;
  }
  if (!first) os << " + ";
  os << "O(t^" << prec_ << ")";
  return os.str();
}

TruncSeries eval_poly(const UPoly& f, const TruncSeries& s) {
  const fp_t p = s.modulus();
  const int const_prec = std::max(s.prec(), s.rel_prec());
  if (f.is_zero()) return TruncSeries::zero(p, const_prec);
  TruncSeries r = TruncSeries::constant(p, f.leading(), const_prec);
  for (int i = f.size() - 2; i >= 0; --i) {
    r = r * s;
    if (f.coeff(i)) r = r + TruncSeries::constant(p, f.coeff(i), std::max(r.prec(), const_prec));
  }
  return r;
}

TruncSeries cartier_series(const TruncSeries& form) {
  const fp_t p = form.modulus();
  const int ip = static_cast<int>(p);
  const int prec_out = floor_div(form.prec(), ip);
  if (form.is_zero()) return TruncSeries::zero(p, prec_out);
  const int ord_out = floor_div(form.ord() + 1 + ip - 1, ip) - 1;
  if (ord_out >= prec_out) return TruncSeries::zero(p, prec_out);
  std::vector<fp_t> v(prec_out - ord_out, 0);
  for (int m = ord_out; m < prec_out; ++m) v[m - ord_out] = form.coeff(ip * (m + 1) - 1);
  return TruncSeries(p, ord_out, std::move(v), prec_out);
}

}  // namespace dormant
