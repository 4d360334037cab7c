#include "dormant/poly.hpp"

#include <algorithm>
#include <sstream>

#include "dormant/error.hpp"

namespace dormant {

int Degree::value() const {
  if (kind_ == Kind::MinusInfinity) raise(ErrorCode::InvalidArgument, "degree of the zero polynomial");
  return value_;
}

bool operator<(const Degree& a, const Degree& b) {
  if (a.is_minus_infinity()) return !b.is_minus_infinity();
  if (b.is_minus_infinity()) return false;
  return a.value_ < b.value_;
}

UPoly::UPoly(fp_t p, std::vector<fp_t> coeffs) : p_(p), c_(std::move(coeffs)) {
  for (auto& v : c_) v %= p_;
  trim();
}

void UPoly::trim() {
  while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

UPoly UPoly::constant(fp_t p, long long c) {
  fp_t v = fp_from_int(c, p);
  return v ? UPoly(p, {v}) : UPoly(p);
}

UPoly UPoly::monomial(fp_t p, fp_t c, int n) {
  if (c % p == 0) return UPoly(p);
  std::vector<fp_t> v(n + 1, 0);
  v[n] = c % p;
  return UPoly(p, std::move(v));
}

UPoly UPoly::from_ints(fp_t p, const std::vector<long long>& coeffs) {
  std::vector<fp_t> v;
  v.reserve(coeffs.size());
  for (long long c : coeffs) v.push_back(fp_from_int(c, p));
  return UPoly(p, std::move(v));
}

Degree UPoly::degree() const {
  return c_.empty() ? Degree::minus_infinity() : Degree::finite(static_cast<int>(c_.size()) - 1);
}

int UPoly::low_order() const {
  for (std::size_t i = 0; i < c_.size(); ++i)
    if (c_[i]) return static_cast<int>(i);
  return -1;
}

UPoly UPoly::operator-() const {
  UPoly r = *this;
  for (auto& v : r.c_) v = fp_neg(v, p_);
  return r;
}

UPoly& UPoly::operator+=(const UPoly& o) {
  if (p_ == 0) p_ = o.p_;
  if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), 0);
  for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] = fp_add(c_[i], o.c_[i], p_);
  trim();
  return *this;
}

UPoly& UPoly::operator-=(const UPoly& o) {
  if (p_ == 0) p_ = o.p_;
  if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), 0);
  for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] = fp_sub(c_[i], o.c_[i], p_);
  trim();
  return *this;
}

std::vector<fp_t> poly_mul_schoolbook(const std::vector<fp_t>& a, const std::vector<fp_t>& b, fp_t p) {
  if (a.empty() || b.empty()) return {};
  std::vector<std::uint64_t> acc(a.size() + b.size() - 1, 0);
  const std::uint64_t pp = static_cast<std::uint64_t>(p) * p;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!a[i]) continue;
    const std::uint64_t ai = a[i];
    for (std::size_t j = 0; j < b.size(); ++j) {
      std::uint64_t v = acc[i + j] + ai * b[j];
      acc[i + j] = v >= pp ? v - pp : v;
    }
  }
  std::vector<fp_t> r(acc.size());
  for (std::size_t i = 0; i < acc.size(); ++i) r[i] = static_cast<fp_t>(acc[i] % p);
  return r;
}

namespace {

void add_into(std::vector<fp_t>& dst, std::size_t off, const std::vector<fp_t>& src, fp_t p) {
  if (dst.size() < off + src.size()) dst.resize(off + src.size(), 0);
  for (std::size_t i = 0; i < src.size(); ++i) dst[off + i] = fp_add(dst[off + i], src[i], p);
}

std::vector<fp_t> vec_add(const std::vector<fp_t>& a, const std::vector<fp_t>& b, fp_t p) {
  std::vector<fp_t> r(std::max(a.size(), b.size()), 0);
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i];
  for (std::size_t i = 0; i < b.size(); ++i) r[i] = fp_add(r[i], b[i], p);
  return r;
}

std::vector<fp_t> karatsuba(const std::vector<fp_t>& a, const std::vector<fp_t>& b, fp_t p) {
  if (a.size() < kKaratsubaThreshold || b.size() < kKaratsubaThreshold)
    return poly_mul_schoolbook(a, b, p);
  const std::size_t h = std::max(a.size(), b.size()) / 2;
  auto lo = [h](const std::vector<fp_t>& v) {
    return std::vector<fp_t>(v.begin(), v.begin() + std::min(h, v.size()));
  };
  auto hi = [h](const std::vector<fp_t>& v) {
    return v.size() > h ? std::vector<fp_t>(v.begin() + h, v.end()) : std::vector<fp_t>{};
  };
  std::vector<fp_t> a0 = lo(a), a1 = hi(a), b0 = lo(b), b1 = hi(b);
  std::vector<fp_t> z0 = karatsuba(a0, b0, p);
  std::vector<fp_t> z2 = karatsuba(a1, b1, p);
  std::vector<fp_t> z1 = karatsuba(vec_add(a0, a1, p), vec_add(b0, b1, p), p);
  for (std::size_t i = 0; i < z0.size(); ++i) z1[i] = fp_sub(z1[i], z0[i], p);
  for (std::size_t i = 0; i < z2.size(); ++i) z1[i] = fp_sub(z1[i], z2[i], p);
  std::vector<fp_t> r(a.size() + b.size() - 1, 0);
  add_into(r, 0, z0, p);
  add_into(r, h, z1, p);
  add_into(r, 2 * h, z2, p);
  r.resize(a.size() + b.size() - 1);
  return r;
}

}  // namespace

std::vector<fp_t> poly_mul_vec(const std::vector<fp_t>& a, const std::vector<fp_t>& b, fp_t p) {
  if (a.empty() || b.empty()) return {};
  return karatsuba(a, b, p);
}

UPoly operator*(const UPoly& a, const UPoly& b) {
  fp_t p = a.p_ ? a.p_ : b.p_;
  return UPoly(p, poly_mul_vec(a.c_, b.c_, p));
}

UPoly UPoly::scaled(fp_t s) const {
  s %= p_;
  if (s == 0) return UPoly(p_);
  UPoly r = *this;
  for (auto& v : r.c_) v = fp_mul(v, s, p_);
  return r;
}

UPoly UPoly::shifted(int n) const {
  if (is_zero() || n == 0) return *this;
  std::vector<fp_t> v(n, 0);
  v.insert(v.end(), c_.begin(), c_.end());
  return UPoly(p_, std::move(v));
}

UPoly UPoly::pow(unsigned e) const {
  UPoly r = UPoly::constant(p_, 1), b = *this;
  while (e) {
    if (e & 1) r = r * b;
    e >>= 1;
    if (e) b = b * b;
  }
  return r;
}

std::pair<UPoly, UPoly> UPoly::divmod(const UPoly& a, const UPoly& b) {
  if (b.is_zero()) raise(ErrorCode::ZeroDenominator, "polynomial division by zero");
  const fp_t p = b.p_;
  if (a.size() < b.size()) return {UPoly(p), a};
  std::vector<fp_t> r = a.c_;
  const int db = b.size() - 1;
  std::vector<fp_t> q(a.size() - db, 0);
  const fp_t inv_lead = fp_inv(b.leading(), p);
  for (int i = a.size() - 1; i >= db; --i) {
    fp_t c = r[i];
    if (!c) continue;
    c = fp_mul(c, inv_lead, p);
    q[i - db] = c;
    for (int j = 0; j <= db; ++j) r[i - db + j] = fp_sub(r[i - db + j], fp_mul(c, b.c_[j], p), p);
  }
  r.resize(db);
  return {UPoly(p, std::move(q)), UPoly(p, std::move(r))};
}

UPoly UPoly::monic() const {
  if (is_zero() || leading() == 1) return *this;
  return scaled(fp_inv(leading(), p_));
}

UPoly UPoly::derivative() const {
  if (c_.size() <= 1) return UPoly(p_);
  std::vector<fp_t> v(c_.size() - 1);
  for (std::size_t i = 1; i < c_.size(); ++i) v[i - 1] = fp_mul(c_[i], static_cast<fp_t>(i % p_), p_);
  return UPoly(p_, std::move(v));
}

fp_t UPoly::eval(fp_t x) const {
  fp_t r = 0;
  for (std::size_t i = c_.size(); i-- > 0;) r = fp_add(fp_mul(r, x, p_), c_[i], p_);
  return r;
}

UPoly UPoly::inflate(int k) const {
  if (is_zero() || k == 1) return *this;
  std::vector<fp_t> v((c_.size() - 1) * k + 1, 0);
  for (std::size_t i = 0; i < c_.size(); ++i) v[i * k] = c_[i];
  return UPoly(p_, std::move(v));
}

std::optional<UPoly> UPoly::pth_root() const {
  std::vector<fp_t> v;
  for (std::size_t i = 0; i < c_.size(); ++i) {
    if (c_[i] && i % p_) return std::nullopt;
  }
  if (c_.empty()) return UPoly(p_);
  v.resize((c_.size() - 1) / p_ + 1, 0);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = c_[i * p_];
  return UPoly(p_, std::move(v));
}

UPoly UPoly::compose(const UPoly& g) const {
  UPoly r(p_);
  for (std::size_t i = c_.size(); i-- > 0;) r = r * g + UPoly::constant(p_, c_[i]);
  return r;
}

std::string UPoly::to_string() const {
  if (c_.empty()) return "0";
  std::ostringstream os;
  for (std::size_t i = 0; i < c_.size(); ++i) {
    if (i) os << ' ';
    os << c_[i];
  }
  return os.str();
}

UPoly gcd(const UPoly& a, const UPoly& b) {
  UPoly x = a, y = b;
  while (!y.is_zero()) {
    UPoly r = UPoly::divmod(x, y).second;
    x = std::move(y);
    y = std::move(r);
  }
  return x.monic();
}

namespace {

UPoly powmod(UPoly base, std::uint64_t e, const UPoly& m) {
  const fp_t p = m.modulus();
  UPoly r = UPoly::constant(p, 1) % m;
  base = base % m;
  while (e) {
    if (e & 1) r = (r * base) % m;
    e >>= 1;
    if (e) base = (base * base) % m;
  }
  return r;
}

// f squarefree, product of distinct linear factors over F_p.
void split_linear(const UPoly& f, std::vector<fp_t>& out) {
  const fp_t p = f.modulus();
  if (f.size() <= 1) return;
  if (f.size() == 2) {
    out.push_back(fp_neg(fp_mul(f.coeff(0), fp_inv(f.coeff(1), p), p), p));
    return;
  }
  for (fp_t a = 0; a < p; ++a) {
    UPoly shift(p, {a, 1});
    UPoly h = powmod(shift, (p - 1) / 2, f) - UPoly::constant(p, 1);
    UPoly g = gcd(h, f);
    if (g.size() > 1 && g.size() < f.size()) {
      split_linear(g, out);
      split_linear(f / g, out);
      return;
    }
  }
}

}  // namespace

std::vector<fp_t> rational_roots(const UPoly& f) {
  std::vector<fp_t> roots;
  if (f.size() <= 1) return roots;
  const fp_t p = f.modulus();
  UPoly m = f.monic();
  if (static_cast<std::uint64_t>(p) * static_cast<std::uint64_t>(f.size()) < 200000) {
    for (fp_t a = 0; a < p; ++a)
      if (m.eval(a) == 0) roots.push_back(a);
    return roots;
  }
  UPoly xp = powmod(UPoly::x(p), p, m) - UPoly::x(p);
  UPoly g = gcd(xp, m);
  split_linear(g, roots);
  std::sort(roots.begin(), roots.end());
  return roots;
}

UPoly parse_upoly(fp_t p, const std::string& text) {
  std::istringstream is(text);
  std::vector<long long> v;
  std::string tok;
  while (is >> tok) {
    std::size_t pos = 0;
    long long c = 0;
    try {
      c = std::stoll(tok, &pos);
    } catch (const std::exception&) {
      raise(ErrorCode::SyntaxError, "bad coefficient '" + tok + "'");
    }
    if (pos != tok.size()) raise(ErrorCode::SyntaxError, "bad coefficient '" + tok + "'");
    v.push_back(c);
  }
  if (v.empty()) raise(ErrorCode::SyntaxError, "empty polynomial");
  return UPoly::from_ints(p, v);
}

}  // namespace dormant
