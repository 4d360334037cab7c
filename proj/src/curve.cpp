#include "dormant/curve.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "dormant/error.hpp"
#include "dormant/linalg.hpp"

namespace dormant {

std::string Mark::to_string() const { return infinite ? "inf" : std::to_string(x); }

namespace {

std::vector<UPoly> zeros(fp_t p, int d) { return std::vector<UPoly>(d, UPoly(p)); }

UPoly one_poly(fp_t p) { return UPoly::constant(p, 1); }

}  // namespace

std::shared_ptr<const Curve> Curve::p1(fp_t p, std::vector<Mark> marks) {
  PrimeField field(p);
  for (std::size_t i = 0; i < marks.size(); ++i) {
    if (!marks[i].infinite && marks[i].x >= p)
      raise(ErrorCode::InvalidArgument, "mark outside F_p");
    for (std::size_t j = 0; j < i; ++j)
      if (marks[i] == marks[j]) raise(ErrorCode::InvalidArgument, "repeated mark " + marks[i].to_string());
  }
  std::shared_ptr<Curve> c(new Curve());
  c->kind_ = CurveKind::P1Marked;
  c->p_ = field.p();
  c->d_ = 1;
  c->marks_ = std::move(marks);
  c->init_field();
  return c;
}

std::shared_ptr<const Curve> Curve::weierstrass(fp_t p, long long a, long long b) {
  PrimeField field(p);
  const fp_t fa = fp_from_int(a, p), fb = fp_from_int(b, p);
  // 4a^3 + 27b^2 != 0 (p odd, so the factor -16 is a unit unless p = 3 divides 27).
  const fp_t disc = fp_add(fp_mul(4, fp_pow(fa, 3, p), p), fp_mul(27 % p, fp_mul(fb, fb, p), p), p);
  if (disc == 0) raise(ErrorCode::InvalidArgument, "singular Weierstrass cubic");
  std::shared_ptr<Curve> c(new Curve());
  c->kind_ = CurveKind::Weierstrass;
  c->p_ = field.p();
  c->a_ = fa;
  c->b_ = fb;
  c->d_ = 2;
  c->init_field();
  return c;
}

std::shared_ptr<const Curve> Curve::raynaud(fp_t p, int l) {
  PrimeField field(p);
  if (l < 1) raise(ErrorCode::InvalidArgument, "Raynaud index must be positive");
  if (static_cast<long long>(l) * p < 4) raise(ErrorCode::InvalidArgument, "Raynaud curve needs lp >= 4");
  std::shared_ptr<Curve> c(new Curve());
  c->kind_ = CurveKind::RaynaudPlane;
  c->p_ = field.p();
  c->l_ = l;
  c->d_ = static_cast<int>(l * p) - 1;
  c->init_field();
  return c;
}

UPoly Curve::cubic() const { return UPoly(p_, {b_, a_, 0, 1}); }

void Curve::init_field() {
  const fp_t p = p_;
  const int d = d_;
  ypow_d_.assign(d, RatFunc(p));
  switch (kind_) {
    case CurveKind::P1Marked:
      ypow_d_[0] = RatFunc(p);
      break;
    case CurveKind::Weierstrass:
      ypow_d_[0] = RatFunc(cubic());
      break;
    case CurveKind::RaynaudPlane: {
      // y^d = x^(lp-1) - y/x
      ypow_d_[0] = RatFunc(UPoly::monomial(p, 1, l_ * static_cast<int>(p) - 1));
      ypow_d_[1] = RatFunc::normalize(UPoly::constant(p, -1), UPoly::x(p));
      break;
    }
  }
  // Reduction table for y^(d+j), j = 0..d-2, over a common denominator.
  red_den_ = one_poly(p);
  red_num_.clear();
  if (kind_ != CurveKind::P1Marked) {
    std::vector<std::vector<RatFunc>> table;
    std::vector<RatFunc> cur = ypow_d_;
    for (int j = 0; j + 1 < d; ++j) {
      table.push_back(cur);
      std::vector<RatFunc> next(d, RatFunc(p));
      for (int i = 1; i < d; ++i) next[i] = cur[i - 1];
      for (int i = 0; i < d; ++i) next[i] = next[i] + cur[d - 1] * ypow_d_[i];
      cur = next;
    }
    for (const auto& row : table)
      for (const auto& e : row) {
        UPoly g = gcd(red_den_, e.den());
        red_den_ = red_den_ * (e.den() / g);
      }
    for (const auto& row : table) {
      std::vector<UPoly> nums;
      for (const auto& e : row) nums.push_back(e.num() * (red_den_ / e.den()));
      red_num_.push_back(nums);
    }
  }
  CurvePtr self = shared_from_this();
  // dy/dx and the trivializing form.
  switch (kind_) {
    case CurveKind::P1Marked: {
      dy_nums_ = zeros(p, 1);
      dy_den_ = one_poly(p);
      eta_nums_ = {one_poly(p)};
      eta_den_ = one_poly(p);
      break;
    }
    case CurveKind::Weierstrass: {
      // y' = f'/(2y) = f' y / (2 f)
      UPoly f = cubic();
      FFElem dy = FFElem(self, {UPoly(p), f.derivative()}, f.scaled(2));
      dy_nums_ = dy.nums();
      dy_den_ = dy.den();
      FFElem w = self->y().inverse();
      eta_nums_ = w.nums();
      eta_den_ = w.den();
      break;
    }
    case CurveKind::RaynaudPlane: {
      // F = x^{lp} - x y^d - y; F_x = -y^d, F_y = -d x y^{d-1} - 1 = x y^{d-1} - 1.
      FFElem yy = self->y();
      FFElem num = yy.pow(d);
      FFElem den = self->x() * yy.pow(d - 1) - self->one();
      FFElem dy = num * den.inverse();
      dy_nums_ = dy.nums();
      dy_den_ = dy.den();
      FFElem w = yy.inverse().derivative();
      eta_nums_ = w.nums();
      eta_den_ = w.den();
      break;
    }
  }
  // Frobenius basis y^(ip) and its inverse, used for p-th roots.
  frob_basis_.clear();
  frob_inv_.clear();
  if (d > 1) {
    FFElem yp = self->y().pow(p);
    FFElem cur = self->one();
    for (int i = 0; i < d; ++i) {
      std::vector<RatFunc> row;
      for (int k = 0; k < d; ++k) row.push_back(cur.component(k));
      frob_basis_.push_back(row);
      cur = cur * yp;
    }
    // Solve (M^T) G = c; store the inverse of M^T column by column.
    std::vector<std::vector<RatFunc>> mt(d, std::vector<RatFunc>(d, RatFunc(p)));
    for (int i = 0; i < d; ++i)
      for (int k = 0; k < d; ++k) mt[k][i] = frob_basis_[i][k];
    frob_inv_.assign(d, std::vector<RatFunc>(d, RatFunc(p)));
    for (int k = 0; k < d; ++k) {
      std::vector<RatFunc> e(d, RatFunc(p));
      e[k] = RatFunc::constant(p, 1);
      auto col = solve_square(mt, e);
      if (!col) raise(ErrorCode::InvalidArgument, "Frobenius basis is singular (inseparable model)");
      for (int i = 0; i < d; ++i) frob_inv_[i][k] = (*col)[i];
    }
  }
}

int Curve::genus() const {
  switch (kind_) {
    case CurveKind::P1Marked: return 0;
    case CurveKind::Weierstrass: return 1;
    case CurveKind::RaynaudPlane: {
      const long long lp = static_cast<long long>(l_) * p_;
      return static_cast<int>((lp - 1) * (lp - 2) / 2);
    }
  }
  return 0;
}

std::string Curve::descriptor() const {
  std::ostringstream os;
  switch (kind_) {
    case CurveKind::P1Marked: {
      os << "p1 p=" << p_ << " marks=";
      for (std::size_t i = 0; i < marks_.size(); ++i) os << (i ? "," : "") << marks_[i].to_string();
      break;
    }
    case CurveKind::Weierstrass: os << "ell p=" << p_ << " a=" << a_ << " b=" << b_; break;
    case CurveKind::RaynaudPlane: os << "raynaud p=" << p_ << " l=" << l_; break;
  }
  return os.str();
}

FFElem Curve::zero() const { return FFElem(shared_from_this(), zeros(p_, d_), one_poly(p_)); }

FFElem Curve::one() const { return constant(1); }

FFElem Curve::constant(long long c) const {
  auto v = zeros(p_, d_);
  v[0] = UPoly::constant(p_, c);
  return FFElem(shared_from_this(), v, one_poly(p_));
}

FFElem Curve::x() const {
  auto v = zeros(p_, d_);
  v[0] = UPoly::x(p_);
  return FFElem(shared_from_this(), v, one_poly(p_));
}

FFElem Curve::y() const {
  if (d_ < 2) raise(ErrorCode::InvalidArgument, "the projective line has no y coordinate");
  auto v = zeros(p_, d_);
  v[1] = one_poly(p_);
  return FFElem(shared_from_this(), v, one_poly(p_));
}

FFElem Curve::from_ratfunc(const RatFunc& f) const {
  auto v = zeros(p_, d_);
  v[0] = f.num();
  return FFElem(shared_from_this(), v, f.den());
}

FFElem Curve::dy() const { return FFElem(shared_from_this(), dy_nums_, dy_den_); }

FFElem Curve::eta() const { return FFElem(shared_from_this(), eta_nums_, eta_den_); }

namespace {

std::map<std::string, std::string> key_values(std::istringstream& is) {
  std::map<std::string, std::string> kv;
  std::string tok;
  while (is >> tok) {
    auto eq = tok.find('=');
    if (eq == std::string::npos || eq == 0) raise(ErrorCode::SyntaxError, "expected key=value, got '" + tok + "'");
    std::string k = tok.substr(0, eq);
    if (kv.count(k)) raise(ErrorCode::SemanticError, "duplicate key '" + k + "'");
    kv[k] = tok.substr(eq + 1);
  }
  return kv;
}

long long parse_int(const std::string& s, const std::string& what) {
  std::size_t pos = 0;
  long long v = 0;
  try {
    v = std::stoll(s, &pos);
  } catch (const std::exception&) {
    raise(ErrorCode::SyntaxError, "bad integer for " + what + ": '" + s + "'");
  }
  if (pos != s.size() || s.empty()) raise(ErrorCode::SyntaxError, "bad integer for " + what + ": '" + s + "'");
  return v;
}

fp_t parse_prime(const std::map<std::string, std::string>& kv) {
  auto it = kv.find("p");
  if (it == kv.end()) raise(ErrorCode::SyntaxError, "missing p=");
  long long p = parse_int(it->second, "p");
  if (p < 3 || p >= (1LL << 31) || !is_prime(static_cast<std::uint64_t>(p)))
    raise(ErrorCode::SemanticError, "p must be an odd prime below 2^31");
  return static_cast<fp_t>(p);
}

void expect_keys(const std::map<std::string, std::string>& kv, std::initializer_list<const char*> keys) {
  for (const auto& [k, v] : kv) {
    bool ok = false;
    for (const char* e : keys) ok = ok || k == e;
    if (!ok) raise(ErrorCode::SyntaxError, "unexpected key '" + k + "'");
  }
  for (const char* e : keys)
    if (!kv.count(e)) raise(ErrorCode::SyntaxError, std::string("missing ") + e + "=");
}

}  // namespace

CurvePtr parse_curve(const std::string& descriptor) {
  std::istringstream is(descriptor);
  std::string kind;
  if (!(is >> kind)) raise(ErrorCode::SyntaxError, "empty curve descriptor");
  auto kv = key_values(is);
  if (kind == "p1") {
    expect_keys(kv, {"p", "marks"});
    fp_t p = parse_prime(kv);
    std::vector<Mark> marks;
    std::string list = kv["marks"];
    if (!list.empty()) {
      std::stringstream ss(list);
      std::string item;
      while (std::getline(ss, item, ',')) {
        if (item == "inf") {
          marks.push_back(Mark::infinity());
        } else {
          long long v = parse_int(item, "mark");
          marks.push_back(Mark::at(fp_from_int(v, p)));
        }
      }
      if (list.back() == ',') raise(ErrorCode::SyntaxError, "trailing comma in marks");
    }
    for (std::size_t i = 0; i < marks.size(); ++i)
      for (std::size_t j = 0; j < i; ++j)
        if (marks[i] == marks[j]) raise(ErrorCode::SemanticError, "repeated mark " + marks[i].to_string());
    return Curve::p1(p, marks);
  }
  if (kind == "ell") {
    expect_keys(kv, {"p", "a", "b"});
    fp_t p = parse_prime(kv);
    long long a = parse_int(kv["a"], "a"), b = parse_int(kv["b"], "b");
    const fp_t fa = fp_from_int(a, p), fb = fp_from_int(b, p);
    const fp_t disc = fp_add(fp_mul(4, fp_pow(fa, 3, p), p), fp_mul(27 % p, fp_mul(fb, fb, p), p), p);
    if (disc == 0) raise(ErrorCode::SemanticError, "singular Weierstrass cubic");
    return Curve::weierstrass(p, a, b);
  }
  if (kind == "raynaud") {
    expect_keys(kv, {"p", "l"});
    fp_t p = parse_prime(kv);
    long long l = parse_int(kv["l"], "l");
    if (l < 1 || l * p < 4) raise(ErrorCode::SemanticError, "Raynaud curve needs l >= 1 and lp >= 4");
    if (l * p > 64) raise(ErrorCode::SemanticError, "Raynaud curve too large (lp > 64)");
    return Curve::raynaud(p, static_cast<int>(l));
  }
  raise(ErrorCode::SyntaxError, "unknown curve kind '" + kind + "'");
}

// ---------------------------------------------------------------------------

FFElem::FFElem(CurvePtr curve, std::vector<UPoly> nums, UPoly den) {
  *this = make(curve, std::move(nums), std::move(den));
}

FFElem FFElem::make(const CurvePtr& c, std::vector<UPoly> nums, UPoly den) {
  const fp_t p = c->p();
  const int d = c->degree();
  if (static_cast<int>(nums.size()) > d) raise(ErrorCode::InvalidArgument, "element not reduced modulo the curve");
  nums.resize(d, UPoly(p));
  if (den.is_zero()) raise(ErrorCode::ZeroDenominator, "function-field element with zero denominator");
  bool all_zero = true;
  for (const auto& n : nums) all_zero = all_zero && n.is_zero();
  FFElem r;
  r.curve_ = c;
  if (all_zero) {
    r.nums_ = std::move(nums);
    r.den_ = UPoly::constant(p, 1);
    return r;
  }
  UPoly g = den;
  for (const auto& n : nums) {
    if (g.size() <= 1) break;
    if (!n.is_zero()) g = gcd(g, n);
  }
  if (g.size() > 1) {
    for (auto& n : nums) n = n / g;
    den = den / g;
  }
  const fp_t inv = fp_inv(den.leading(), p);
  if (inv != 1) {
    for (auto& n : nums) n = n.scaled(inv);
    den = den.scaled(inv);
  }
  r.nums_ = std::move(nums);
  r.den_ = std::move(den);
  return r;
}

RatFunc FFElem::component(int i) const { return RatFunc::normalize(nums_.at(i), den_); }

bool FFElem::is_zero() const {
  for (const auto& n : nums_)
    if (!n.is_zero()) return false;
  return true;
}

bool FFElem::in_base_field() const {
  for (std::size_t i = 1; i < nums_.size(); ++i)
    if (!nums_[i].is_zero()) return false;
  return true;
}

bool FFElem::is_constant() const { return in_base_field() && den_.is_one() && nums_[0].is_constant(); }

FFElem FFElem::operator-() const {
  FFElem r = *this;
  for (auto& n : r.nums_) n = -n;
  return r;
}

namespace {

void check_same(const FFElem& a, const FFElem& b) {
  if (a.curve() != b.curve()) raise(ErrorCode::CurveMismatch, "elements live on different curves");
}

}  // namespace

FFElem operator+(const FFElem& a, const FFElem& b) {
  check_same(a, b);
  const int d = a.curve_->degree();
  std::vector<UPoly> nums(d);
  if (a.den_ == b.den_) {
    for (int i = 0; i < d; ++i) nums[i] = a.nums_[i] + b.nums_[i];
    if (a.den_.is_one()) {
      FFElem r;
      r.curve_ = a.curve_;
      r.nums_ = std::move(nums);
      r.den_ = a.den_;
      return r;
    }
    return FFElem::make(a.curve_, std::move(nums), a.den_);
  }
  UPoly g = gcd(a.den_, b.den_);
  UPoly fa = b.den_ / g, fb = a.den_ / g;
  for (int i = 0; i < d; ++i) nums[i] = a.nums_[i] * fa + b.nums_[i] * fb;
  return FFElem::make(a.curve_, std::move(nums), a.den_ * fa);
}

FFElem operator-(const FFElem& a, const FFElem& b) { return a + (-b); }

FFElem operator*(const FFElem& a, const FFElem& b) {
  check_same(a, b);
  const Curve& c = *a.curve_;
  const int d = c.degree();
  const fp_t p = c.p();
  if (a.is_zero()) return a;
  if (b.is_zero()) return b;
  if (d == 1) {
    RatFunc r = RatFunc::normalize(a.nums_[0], a.den_) * RatFunc::normalize(b.nums_[0], b.den_);
    FFElem out;
    out.curve_ = a.curve_;
    out.nums_ = {r.num()};
    out.den_ = r.den();
    return out;
  }
  std::vector<UPoly> prod(2 * d - 1, UPoly(p));
  for (int i = 0; i < d; ++i) {
    if (a.nums_[i].is_zero()) continue;
    for (int j = 0; j < d; ++j) {
      if (b.nums_[j].is_zero()) continue;
      prod[i + j] += a.nums_[i] * b.nums_[j];
    }
  }
  bool high = false;
  for (int k = d; k < 2 * d - 1; ++k) high = high || !prod[k].is_zero();
  std::vector<UPoly> nums(d, UPoly(p));
  UPoly den = a.den_ * b.den_;
  if (!high) {
    for (int i = 0; i < d; ++i) nums[i] = prod[i];
  } else {
    const UPoly& L = c.red_den();
    for (int i = 0; i < d; ++i) nums[i] = L.is_one() ? prod[i] : prod[i] * L;
    for (int j = 0; j + 1 < d; ++j) {
      const UPoly& pj = prod[d + j];
      if (pj.is_zero()) continue;
      for (int i = 0; i < d; ++i) {
        const UPoly& r = c.red_num()[j][i];
        if (!r.is_zero()) nums[i] += pj * r;
      }
    }
    if (!L.is_one()) den = den * L;
  }
  return FFElem::make(a.curve_, std::move(nums), std::move(den));
}

FFElem FFElem::scaled(fp_t s) const {
  s %= p();
  if (s == 0) return curve_->zero();
  FFElem r = *this;
  for (auto& n : r.nums_) n = n.scaled(s);
  return r;
}

FFElem FFElem::times(const RatFunc& f) const {
  if (f.is_zero() || is_zero()) return curve_->zero();
  std::vector<UPoly> nums = nums_;
  for (auto& n : nums) n = n * f.num();
  return make(curve_, std::move(nums), den_ * f.den());
}

FFElem FFElem::inverse() const {
  if (is_zero()) raise(ErrorCode::ZeroDenominator, "inverse of zero function");
  const Curve& c = *curve_;
  const int d = c.degree();
  const fp_t p = c.p();
  if (d == 1) {
    RatFunc r = component(0).inverse();
    return c.from_ratfunc(r);
  }
  if (c.kind() == CurveKind::Weierstrass) {
    // (A0 + A1 y)/D -> D (A0 - A1 y) / (A0^2 - A1^2 f)
    const UPoly& a0 = nums_[0];
    const UPoly& a1 = nums_[1];
    UPoly norm = a0 * a0 - a1 * a1 * c.cubic();
    return make(curve_, {a0 * den_, -(a1 * den_)}, norm);
  }
  // Solve (multiplication by this) z = 1 over F_p(x).
  std::vector<std::vector<RatFunc>> m(d, std::vector<RatFunc>(d, RatFunc(p)));
  FFElem col = *this;
  FFElem yy = c.y();
  for (int j = 0; j < d; ++j) {
    for (int i = 0; i < d; ++i) m[i][j] = col.component(i);
    col = col * yy;
  }
  std::vector<RatFunc> e(d, RatFunc(p));
  e[0] = RatFunc::constant(p, 1);
  auto z = solve_square(m, e);
  if (!z) raise(ErrorCode::ZeroDenominator, "element is not invertible");
  FFElem r = c.zero();
  FFElem ypow = c.one();
  for (int i = 0; i < d; ++i) {
    r = r + ypow.times((*z)[i]);
    ypow = ypow * yy;
  }
  return r;
}

FFElem FFElem::pow(long long e) const {
  if (e < 0) return inverse().pow(-e);
  FFElem r = curve_->one(), b = *this;
  while (e) {
    if (e & 1) r = r * b;
    e >>= 1;
    if (e) b = b * b;
  }
  return r;
}

FFElem FFElem::derivative() const {
  const Curve& c = *curve_;
  const int d = c.degree();
  const fp_t p = c.p();
  if (is_zero()) return *this;
  if (d == 1) return c.from_ratfunc(component(0).derivative());
  // N = sum A_i y^i; D(N) = sum A_i' y^i + (sum i A_i y^(i-1)) dy.
  std::vector<UPoly> dn(d, UPoly(p)), inner(d, UPoly(p));
  for (int i = 0; i < d; ++i) {
    dn[i] = nums_[i].derivative();
    if (i >= 1) inner[i - 1] = nums_[i].scaled(static_cast<fp_t>(i % p));
  }
  FFElem dN = FFElem(curve_, dn, UPoly::constant(p, 1)) + FFElem(curve_, inner, UPoly::constant(p, 1)) * c.dy();
  if (den_.is_one()) return dN;
  FFElem N(curve_, nums_, UPoly::constant(p, 1));
  RatFunc inv_den = RatFunc::normalize(UPoly::constant(p, 1), den_);
  RatFunc dden = RatFunc::normalize(den_.derivative(), den_ * den_);
  return dN.times(inv_den) - N.times(dden);
}

FFElem FFElem::frobenius() const {
  const Curve& c = *curve_;
  const int d = c.degree();
  const fp_t p = c.p();
  if (d == 1) return c.from_ratfunc(component(0).frobenius());
  FFElem r = c.zero();
  for (int i = 0; i < d; ++i) {
    if (nums_[i].is_zero()) continue;
    FFElem basis = c.zero();
    for (int k = 0; k < d; ++k) basis = basis + c.y().pow(k).times(c.frob_basis()[i][k]);
    r = r + basis.times(RatFunc(nums_[i].inflate(static_cast<int>(p))));
  }
  return r.times(RatFunc::normalize(UPoly::constant(p, 1), den_.inflate(static_cast<int>(p))));
}

std::optional<FFElem> FFElem::pth_root() const {
  const Curve& c = *curve_;
  const int d = c.degree();
  const fp_t p = c.p();
  if (d == 1) {
    auto r = component(0).pth_root();
    if (!r) return std::nullopt;
    return c.from_ratfunc(*r);
  }
  std::vector<RatFunc> comp;
  for (int k = 0; k < d; ++k) comp.push_back(component(k));
  FFElem r = c.zero();
  FFElem ypow = c.one();
  for (int i = 0; i < d; ++i) {
    RatFunc gi(p);
    for (int k = 0; k < d; ++k)
      if (!comp[k].is_zero()) gi += c.frob_basis_inverse()[i][k] * comp[k];
    auto root = gi.pth_root();
    if (!root) return std::nullopt;
    r = r + ypow.times(*root);
    ypow = ypow * c.y();
  }
  return r;
}

bool operator==(const FFElem& a, const FFElem& b) {
  return a.curve_ == b.curve_ && a.den_ == b.den_ && a.nums_ == b.nums_;
}

std::string FFElem::to_string() const {
  std::string s;
  for (int i = 0; i < static_cast<int>(nums_.size()); ++i) {
    if (i) s += " | ";
    s += component(i).to_string();
  }
  return s;
}

FFElem parse_ffelem(const CurvePtr& curve, const std::string& text) {
  std::vector<std::string> parts;
  std::string cur;
  for (char ch : text) {
    if (ch == '|') {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  parts.push_back(cur);
  if (static_cast<int>(parts.size()) > curve->degree())
    raise(ErrorCode::SemanticError, "too many y-components for this curve");
  FFElem r = curve->zero();
  for (std::size_t i = 0; i < parts.size(); ++i) {
    RatFunc f = parse_ratfunc(curve->p(), parts[i]);
    if (f.is_zero()) continue;
    FFElem term = curve->from_ratfunc(f);
    if (i > 0) term = term * curve->y().pow(static_cast<long long>(i));
    r = r + term;
  }
  return r;
}

OrdinaryReport is_ordinary(const Curve& curve) {
  if (curve.kind() != CurveKind::Weierstrass) raise(ErrorCode::UnsupportedCurve, "Hasse invariant needs a Weierstrass curve");
  const fp_t p = curve.p();
  UPoly h = curve.cubic().pow((p - 1) / 2);
  fp_t hasse = h.coeff(static_cast<int>(p) - 1);
  return {hasse != 0, hasse};
}

}  // namespace dormant
