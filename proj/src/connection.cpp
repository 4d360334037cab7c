#include "dormant/connection.hpp"

#include <sstream>

#include "dormant/error.hpp"

namespace dormant {

// ---------------------------------------------------------------------------
// Labels

namespace {

std::string word_to_string(const LineLabel& l) {
  std::vector<std::string> parts;
  if (l.omega == 1) parts.push_back("Omega_log");
  else if (l.omega > 1) parts.push_back("Omega_log^" + std::to_string(l.omega));
  else if (l.omega == -1) parts.push_back("T_log");
  else if (l.omega < -1) parts.push_back("T_log^" + std::to_string(-l.omega));
  if (!l.twist.empty()) {
    std::string d;
    for (const auto& [k, v] : l.twist) d += (d.empty() ? "" : ",") + std::to_string(v) + "@" + k;
    parts.push_back("O(" + d + ")");
  }
  if (parts.empty()) return "O";
  std::string s;
  for (const auto& p : parts) s += (s.empty() ? "" : "*") + p;
  return s;
}

std::vector<std::string> split_top(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  int depth = 0;
  for (char ch : s) {
    if (ch == '(') ++depth;
    if (ch == ')') --depth;
    if (ch == sep && depth == 0) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

int parse_power(const std::string& w, std::size_t base_len) {
  if (w.size() == base_len) return 1;
  if (w[base_len] != '^' || w.size() == base_len + 1) raise(ErrorCode::SyntaxError, "bad bundle word '" + w + "'");
  const std::string e = w.substr(base_len + 1);
  if (e.find_first_not_of("0123456789") != std::string::npos || e.size() > 4)
    raise(ErrorCode::SyntaxError, "bad exponent in '" + w + "'");
  return std::stoi(e);
}

bool same_section(const std::optional<FFElem>& a, const std::optional<FFElem>& b) {
  if (!a && !b) return true;
  if (a && b) return *a == *b;
  const FFElem& s = a ? *a : *b;
  return s.is_constant() && s.nums()[0].is_one();
}

}  // namespace

std::string to_string(const BundleLabel& b) {
  std::string s;
  for (const auto& l : b.summands) s += (s.empty() ? "" : "+") + word_to_string(l);
  return s;
}

BundleLabel parse_bundle_label(const Curve& curve, const std::string& text) {
  BundleLabel out;
  for (const auto& summand_raw : split_top(text, '+')) {
    const std::string summand = trim(summand_raw);
    if (summand.empty()) raise(ErrorCode::SyntaxError, "empty bundle summand in '" + text + "'");
    LineLabel l;
    for (const auto& word_raw : split_top(summand, '*')) {
      const std::string w = trim(word_raw);
      if (w == "O") continue;
      if (w.rfind("Omega_log", 0) == 0) {
        l.omega += parse_power(w, 9);
      } else if (w.rfind("T_log", 0) == 0) {
        l.omega -= parse_power(w, 5);
      } else if (w.size() > 3 && w.rfind("O(", 0) == 0 && w.back() == ')') {
        for (const auto& entry : split_top(w.substr(2, w.size() - 3), ',')) {
          const auto at = entry.find('@');
          if (at == std::string::npos || at == 0) raise(ErrorCode::SyntaxError, "bad divisor entry '" + entry + "'");
          long long c = 0;
          std::size_t pos = 0;
          try {
            c = std::stoll(entry.substr(0, at), &pos);
          } catch (const std::exception&) {
            raise(ErrorCode::SyntaxError, "bad divisor coefficient in '" + entry + "'");
          }
          if (pos != at) raise(ErrorCode::SyntaxError, "bad divisor coefficient in '" + entry + "'");
          const std::string place = place_label(curve, parse_place(curve, entry.substr(at + 1)));
          l.twist = add(l.twist, Divisor{{place, c}});
        }
      } else {
        raise(ErrorCode::SyntaxError, "unknown bundle word '" + w + "'");
      }
    }
    out.summands.push_back(std::move(l));
  }
  return out;
}

std::vector<Place> mark_places(const Curve& curve) {
  std::vector<Place> out;
  for (const auto& m : curve.marks()) out.push_back(m.infinite ? Place::infinity() : Place::affine(m.x));
  return out;
}

namespace {

bool is_mark(const Curve& curve, const Place& place) {
  if (curve.kind() != CurveKind::P1Marked) return false;
  for (const auto& m : curve.marks())
    if ((m.infinite && place.kind == Place::Kind::AtInfinity) || (!m.infinite && place.kind == Place::Kind::Affine && m.x == place.x))
      return true;
  return false;
}

// Valuation of the trivializing form eta at a rational place.
long long eta_order(const Curve& curve, const Place& place) {
  switch (curve.kind()) {
    case CurveKind::P1Marked: return place.kind == Place::Kind::AtInfinity ? -2 : 0;
    case CurveKind::Weierstrass: return 0;
    case CurveKind::RaynaudPlane: {
      const long long lp = static_cast<long long>(curve.l()) * curve.p();
      return place.kind == Place::Kind::Affine && place.x == 0 && place.y == 0 ? lp * (lp - 3) : 0;
    }
  }
  return 0;
}

}  // namespace

long long section_order(const CurvePtr& curve, const LineLabel& l, const Place& place) {
  long long k = 0;
  if (l.omega != 0) k += l.omega * (eta_order(*curve, place) + (is_mark(*curve, place) ? 1 : 0));
  if (!l.twist.empty()) {
    auto it = l.twist.find(place_label(*curve, place));
    if (it != l.twist.end()) k += it->second;
  }
  if (l.section) k += valuation(*l.section, place);
  return k;
}

long long label_degree(const Curve& curve, const LineLabel& l) {
  const long long deg_omega_log = 2LL * curve.genus() - 2 + static_cast<long long>(curve.marks().size());
  return l.omega * deg_omega_log + degree(l.twist);
}

// ---------------------------------------------------------------------------
// Matrices

FFMatrix::FFMatrix(const CurvePtr& c, int n) : n_(n), e_(static_cast<std::size_t>(n) * n, c->zero()) {}

FFMatrix FFMatrix::identity(const CurvePtr& c, int n) {
  FFMatrix m(c, n);
  for (int i = 0; i < n; ++i) m(i, i) = c->one();
  return m;
}

bool FFMatrix::is_zero() const {
  for (const auto& e : e_)
    if (!e.is_zero()) return false;
  return true;
}

FFMatrix operator+(const FFMatrix& a, const FFMatrix& b) {
  FFMatrix r = a;
  for (std::size_t i = 0; i < r.e_.size(); ++i) r.e_[i] = a.e_[i] + b.e_[i];
  return r;
}

FFMatrix operator-(const FFMatrix& a, const FFMatrix& b) {
  FFMatrix r = a;
  for (std::size_t i = 0; i < r.e_.size(); ++i) r.e_[i] = a.e_[i] - b.e_[i];
  return r;
}

FFMatrix FFMatrix::operator-() const {
  FFMatrix r = *this;
  for (auto& e : r.e_) e = -e;
  return r;
}

FFMatrix operator*(const FFMatrix& a, const FFMatrix& b) {
  const int n = a.n_;
  FFMatrix r = a;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      FFElem s = a(i, 0) * b(0, j);
      for (int k = 1; k < n; ++k)
        if (!a(i, k).is_zero() && !b(k, j).is_zero()) s += a(i, k) * b(k, j);
      r(i, j) = s;
    }
  return r;
}

FFMatrix FFMatrix::derivative() const {
  FFMatrix r = *this;
  for (auto& e : r.e_) e = e.derivative();
  return r;
}

FFMatrix FFMatrix::transpose() const {
  FFMatrix r = *this;
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) r(i, j) = (*this)(j, i);
  return r;
}

// ---------------------------------------------------------------------------
// Connections

LogConnection::LogConnection(CurvePtr curve, FFMatrix a, BundleLabel label)
    : curve_(std::move(curve)), a_(std::move(a)), label_(std::move(label)) {
  if (a_.n() < 1) raise(ErrorCode::InvalidArgument, "connection rank must be positive");
  if (label_.rank() != a_.n()) raise(ErrorCode::InvalidArgument, "bundle label rank does not match the matrix");
  for (int i = 0; i < a_.n(); ++i)
    for (int j = 0; j < a_.n(); ++j)
      if (a_(i, j).curve() != curve_) raise(ErrorCode::CurveMismatch, "matrix entry on another curve");
}

LogConnection LogConnection::rank_one(const CurvePtr& curve, const FFElem& a, LineLabel label) {
  FFMatrix m(curve, 1);
  m(0, 0) = a;
  return LogConnection(curve, m, BundleLabel::line(std::move(label)));
}

void LogConnection::validate() const {
  const Curve& c = *curve_;
  const fp_t p = c.p();
  const int n = rank();
  for (const Place& pl : rational_places(c)) {
    const bool marked = is_mark(c, pl);
    std::vector<long long> k(n);
    for (int i = 0; i < n; ++i) k[i] = section_order(curve_, label_.summands[i], pl);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const FFElem& e = a_(i, j);
        if (e.is_zero()) {
          if (i == j && !marked && fp_from_int(k[i], p) != 0)
            raise(ErrorCode::UndeclaredPoleDetected, "log pole of the frame at unmarked " + place_label(c, pl));
          continue;
        }
        const long long shift = k[i] - k[j];
        const long long v = form_valuation(e, pl) + shift;
        const bool ok_order = v >= (marked || i == j ? -1 : 0);
        bool ok_res = true;
        if (i == j && !marked) ok_res = v >= 0 ? fp_from_int(k[i], p) == 0 : residue(e, pl) == fp_from_int(k[i], p);
        if (!ok_order || !ok_res)
          raise(ErrorCode::UndeclaredPoleDetected, "entry (" + std::to_string(i) + "," + std::to_string(j) +
                                                       ") has a non-log pole at " + place_label(c, pl));
      }
  }
  if (c.kind() != CurveKind::P1Marked) return;
  // Poles at non-rational points of the line are only allowed where a section has zeros or poles.
  UPoly allowed = UPoly::constant(p, 1);
  for (const auto& l : label_.summands)
    if (l.section) allowed = allowed * l.section->nums()[0] * l.section->den();
  const UPoly frob = UPoly::monomial(p, 1, static_cast<int>(p)) - UPoly::x(p);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      UPoly r = a_(i, j).den();
      for (const UPoly* f : std::vector<const UPoly*>{&frob, &allowed}) {
        for (;;) {
          UPoly g = gcd(r, *f);
          if (g.size() <= 1) break;
          r = r / g;
        }
      }
      if (r.size() > 1) raise(ErrorCode::UndeclaredPoleDetected, "pole at a point outside F_p: " + r.to_string());
    }
}

FFElem p_curvature_rank1(const FFElem& a) {
  const fp_t p = a.p();
  FFElem d = a;
  for (fp_t k = 1; k < p; ++k) d = d.derivative();
  const FFElem ap = a.curve()->degree() == 1 ? a.frobenius() : a.pow(p);
  return ap + d;
}

FFMatrix p_curvature_operator_power(const FFMatrix& a) {
  const CurvePtr& c = a(0, 0).curve();
  const int p = static_cast<int>(c->p());
  const int n = a.n();
  // Coefficients B_k of sum_k B_k d^k, starting from the identity operator.
  std::vector<FFMatrix> b{FFMatrix::identity(c, n)};
  for (int step = 0; step < p; ++step) {
    std::vector<FFMatrix> nb(b.size() + 1, FFMatrix(c, n));
    for (std::size_t k = 0; k < b.size(); ++k) {
      nb[k] = nb[k] + b[k].derivative() + a * b[k];
      nb[k + 1] = nb[k + 1] + b[k];
    }
    b = std::move(nb);
  }
  // (d + A)^p = d^p + Psi; the intermediate coefficients vanish identically.
  for (int k = 1; k < p; ++k)
    if (!b[k].is_zero()) raise(ErrorCode::InvalidArgument, "operator power has a nonzero middle term");
  return b[0];
}

FFMatrix p_curvature(const LogConnection& c) {
  if (c.rank() == 1) {
    FFMatrix m(c.curve(), 1);
    m(0, 0) = p_curvature_rank1(c.entry(0, 0));
    return m;
  }
  return p_curvature_operator_power(c.matrix());
}

ResidueMatrix monodromy_at(const LogConnection& c, const Place& place) {
  const fp_t p = c.curve()->p();
  const int n = c.rank();
  std::vector<long long> k(n);
  for (int i = 0; i < n; ++i) k[i] = section_order(c.curve(), c.label().summands[i], place);
  ResidueMatrix r(static_cast<std::size_t>(n) * n, 0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      // Residue of t^{k_i - k_j} A_ij dx, minus k_j on the diagonal.
      const long long target = -1 - (k[i] - k[j]);
      fp_t v = 0;
      if (!c.entry(i, j).is_zero()) {
        TruncSeries s = expand_upto(c.entry(i, j), place, static_cast<int>(target + 1), true);
        v = s.coeff(static_cast<int>(target));
      }
      if (i == j) v = fp_sub(v, fp_from_int(k[j], p), p);
      r[i * n + j] = v;
    }
  return r;
}

std::vector<ResidueMatrix> monodromy(const LogConnection& c) {
  c.validate();
  std::vector<ResidueMatrix> out;
  for (const Place& pl : mark_places(*c.curve())) out.push_back(monodromy_at(c, pl));
  return out;
}

std::vector<ResidueMatrix> raw_residues(const LogConnection& c) {
  const int n = c.rank();
  std::vector<ResidueMatrix> out;
  for (const Place& pl : mark_places(*c.curve())) {
    ResidueMatrix r(static_cast<std::size_t>(n) * n, 0);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (!c.entry(i, j).is_zero()) r[i * n + j] = residue(c.entry(i, j), pl);
    out.push_back(r);
  }
  return out;
}

bool residue_pcurvature_identity(const LogConnection& c) {
  if (c.rank() != 1) raise(ErrorCode::InvalidArgument, "residue identity is stated for rank 1");
  const CurvePtr& curve = c.curve();
  const fp_t p = curve->p();
  const FFElem psi = p_curvature_rank1(c.entry(0, 0));
  const auto mu = monodromy(c);
  const auto marks = mark_places(*curve);
  for (std::size_t i = 0; i < marks.size(); ++i) {
    // Psi evaluated on t d/dt is (t x'(t))^p Psi; its value at the mark must be mu^p - mu.
    const fp_t m = mu[i][0];
    const fp_t expected = fp_sub(fp_pow(m, p, p), m, p);
    if (psi.is_zero()) {
      if (expected != 0) return false;
      continue;
    }
    int prec = start_precision(*curve, 0);
    for (;;) {
      Branch br = branch_at(curve, marks[i], prec);
      TruncSeries tx = br.x().derivative().shifted(1);
      TruncSeries val = tx.pow(static_cast<int>(p)) * br.expand(psi);
      if (val.prec() > 0) {
        if (val.ord() < 0 && !val.is_zero()) return false;
        if (val.coeff(0) != expected) return false;
        break;
      }
      if (prec >= kMaxPrecision) raise(ErrorCode::InsufficientPrecision, "residue of p-curvature");
      prec *= 2;
    }
  }
  return true;
}

LogConnection canonical_connection(const CurvePtr& curve, const Divisor& descent, const FFElem& s) {
  if (s.curve() != curve) raise(ErrorCode::CurveMismatch, "trivializing section on another curve");
  if (s.is_zero()) raise(ErrorCode::BadTrivialization, "the zero section trivializes nothing");
  const FFElem a = s.derivative() * s.inverse();
  LineLabel l;
  l.twist = scaled(descent, curve->p());
  l.section = s;
  return LogConnection::rank_one(curve, a, l);
}

namespace {

// Horizontal projector sum_{k<p} (-x)^k / k! nabla^k (f).
FFElem horizontal_projection(const FFElem& a, const FFElem& f) {
  const CurvePtr& c = a.curve();
  const fp_t p = c->p();
  const FFElem mx = -c->x();
  FFElem out = f;
  FFElem nab = f;
  FFElem coef = c->one();
  for (fp_t k = 1; k < p; ++k) {
    nab = nab.derivative() + a * nab;
    coef = (coef * mx).scaled(fp_inv(k, p));
    out += coef * nab;
  }
  return out;
}

// Partial-fraction fast path on P^1: a = sum c_i / (x - s_i) with rational simple poles.
std::optional<FFElem> p1_generator(const FFElem& a) {
  const CurvePtr& c = a.curve();
  const fp_t p = c->p();
  const UPoly& num = a.nums()[0];
  const UPoly& den = a.den();
  if (num.size() >= den.size()) return std::nullopt;
  const auto roots = rational_roots(den);
  if (static_cast<int>(roots.size()) != den.size() - 1) return std::nullopt;
  const UPoly dd = den.derivative();
  RatFunc u = RatFunc::constant(p, 1);
  for (fp_t s : roots) {
    const fp_t ds = dd.eval(s);
    if (ds == 0) return std::nullopt;
    const fp_t res = fp_mul(num.eval(s), fp_inv(ds, p), p);
    if (res) u = u * RatFunc::linear_power(p, s, -static_cast<int>(tau_inv(res)));
  }
  FFElem uu = c->from_ratfunc(u);
  if (!(uu.derivative() + a * uu).is_zero()) return std::nullopt;
  return uu;
}

}  // namespace

FFElem horizontal_generator(const FFElem& a) {
  if (!p_curvature_rank1(a).is_zero()) raise(ErrorCode::NotFlat, "p-curvature is nonzero");
  const CurvePtr& c = a.curve();
  if (a.is_zero()) return c->one();
  if (c->kind() == CurveKind::P1Marked)
    if (auto u = p1_generator(a)) return *u;
  FFElem f = c->one();
  for (fp_t j = 0; j < c->p(); ++j) {
    FFElem u = horizontal_projection(a, f);
    if (!u.is_zero()) return u;
    f = f * c->x();
  }
  raise(ErrorCode::NoRationalGenerator, "horizontal projection vanished on 1, x, ..., x^{p-1}");
}

FFElem horizontal_generator(const LogConnection& c) {
  if (c.rank() != 1) raise(ErrorCode::InvalidArgument, "horizontal generator is defined for rank 1");
  return horizontal_generator(c.entry(0, 0));
}

DescentClass frobenius_descent(const LogConnection& c) {
  if (c.rank() != 1) raise(ErrorCode::InvalidArgument, "Frobenius descent is implemented for line bundles");
  const CurvePtr& curve = c.curve();
  const long long p = curve->p();
  DescentClass out;
  out.horizontal = horizontal_generator(c);
  const auto mu = monodromy(c);
  const auto marks = mark_places(*curve);
  long long total = label_degree(*curve, c.label().summands[0]);
  for (const auto& m : mu) {
    out.shift.push_back(tau_inv(m[0]));
    total += out.shift.back();
  }
  if (total % p != 0) raise(ErrorCode::NonzeroShiftedMonodromy, "degree after the shift is not divisible by p");
  out.degree = total / p;
  for (const Place& pl : rational_places(*curve)) {
    long long ord = section_order(curve, c.label().summands[0], pl) + valuation(out.horizontal, pl);
    for (std::size_t i = 0; i < marks.size(); ++i)
      if (marks[i] == pl) ord += out.shift[i];
    if (ord % p != 0)
      raise(ErrorCode::NonzeroShiftedMonodromy, "shifted order not divisible by p at " + place_label(*curve, pl));
    if (ord != 0) out.divisor[place_label(*curve, pl)] = ord / p;
  }
  return out;
}

bool same_descent_class(const DescentClass& a, const DescentClass& b) {
  if (a.degree != b.degree || a.shift != b.shift) return false;
  return (a.horizontal * b.horizontal.inverse()).is_pth_power();
}

namespace {

LineLabel combine(const LineLabel& a, const LineLabel& b) {
  LineLabel r;
  r.omega = a.omega + b.omega;
  r.twist = add(a.twist, b.twist);
  if (a.section && b.section) r.section = *a.section * *b.section;
  else if (a.section) r.section = a.section;
  else if (b.section) r.section = b.section;
  return r;
}

}  // namespace

LogConnection tensor(const LogConnection& a, const LogConnection& b) {
  if (a.curve() != b.curve()) raise(ErrorCode::CurveMismatch, "tensor of connections on different curves");
  const CurvePtr& c = a.curve();
  const int n = a.rank(), m = b.rank();
  FFMatrix r(c, n * m);
  BundleLabel label;
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < m; ++k) label.summands.push_back(combine(a.label().summands[i], b.label().summands[k]));
  // A (x) 1 + 1 (x) B
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < m; ++k)
      for (int j = 0; j < n; ++j)
        for (int l = 0; l < m; ++l) {
          FFElem v = c->zero();
          if (k == l) v += a.entry(i, j);
          if (i == j) v += b.entry(k, l);
          r(i * m + k, j * m + l) = v;
        }
  return LogConnection(c, r, label);
}

LogConnection dual(const LogConnection& c) {
  BundleLabel label;
  for (const auto& l : c.label().summands) {
    LineLabel d;
    d.omega = -l.omega;
    d.twist = scaled(l.twist, -1);
    if (l.section) d.section = l.section->inverse();
    label.summands.push_back(d);
  }
  return LogConnection(c.curve(), -c.matrix().transpose(), label);
}

bool operator==(const LineLabel& a, const LineLabel& b) {
  return a.omega == b.omega && a.twist == b.twist && same_section(a.section, b.section);
}

}  // namespace dormant
