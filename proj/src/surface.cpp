#include "dormant/surface.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "dormant/cartier.hpp"
#include "dormant/error.hpp"

namespace dormant {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  const auto e = s.find_last_not_of(" \t\r");
  return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

bool same_place(const Place& a, const Place& b) { return a == b; }

// Multiplication by f on the basis y^0..y^{d-1}.
std::vector<std::vector<RatFunc>> mult_matrix(const FFElem& f) {
  const CurvePtr& c = f.curve();
  const int d = c->degree();
  std::vector<std::vector<RatFunc>> m(d, std::vector<RatFunc>(d, RatFunc(c->p())));
  FFElem col = f;
  for (int j = 0; j < d; ++j) {
    for (int i = 0; i < d; ++i) m[i][j] = col.component(i);
    col = col * c->y();
  }
  return m;
}

// Division-free characteristic polynomial, highest degree first.
std::vector<RatFunc> berkowitz(const std::vector<std::vector<RatFunc>>& a, fp_t p) {
  const int n = static_cast<int>(a.size());
  std::vector<RatFunc> v{RatFunc::constant(p, 1)};
  for (int r = 0; r < n; ++r) {
    std::vector<RatFunc> q(r + 2, RatFunc(p));
    q[0] = RatFunc::constant(p, 1);
    q[1] = -a[r][r];
    std::vector<RatFunc> w(r, RatFunc(p));
    for (int i = 0; i < r; ++i) w[i] = a[i][r];
    for (int k = 2; k <= r + 1; ++k) {
      RatFunc s(p);
      for (int i = 0; i < r; ++i) s += a[r][i] * w[i];
      q[k] = -s;
      std::vector<RatFunc> nw(r, RatFunc(p));
      for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j) nw[i] += a[i][j] * w[j];
      w = std::move(nw);
    }
    std::vector<RatFunc> nv(r + 2, RatFunc(p));
    for (int i = 0; i <= r + 1; ++i)
      for (int j = 0; j <= std::min(i, r); ++j) nv[i] += q[i - j] * v[j];
    v = std::move(nv);
  }
  return v;
}

// Rational places with v(x - x0) > 0 (x0 finite) or v(x) < 0 (x0 = nullopt), and whether
// their ramification adds up to the full degree.
struct Fiber {
  std::vector<Place> places;
  bool complete = false;
};

Fiber fiber_over(const CurvePtr& c, std::optional<fp_t> x0) {
  Fiber fb;
  long long total = 0;
  const FFElem h = x0 ? c->x() - c->constant(static_cast<long long>(*x0)) : c->x().inverse();
  for (const Place& q : rational_places(*c)) {
    const int v = valuation(h, q);
    if (v > 0) {
      fb.places.push_back(q);
      total += v;
    }
  }
  fb.complete = total == c->degree();
  return fb;
}

bool integral_at_root(const RatFunc& c, fp_t x0) { return c.den().eval(x0) != 0; }
bool integral_at_infinity(const RatFunc& c) {
  if (c.is_zero()) return true;
  return c.num().degree().value() <= c.den().degree().value();
}

}  // namespace

bool Chart::excludes(const Place& q) const {
  if (affine_only && q.kind == Place::Kind::AtInfinity) return true;
  return std::any_of(excluded.begin(), excluded.end(), [&](const Place& e) { return same_place(e, q); });
}

std::string chart_descriptor(const Curve& curve, const Chart& chart) {
  std::string s = "X";
  std::vector<std::string> parts;
  if (chart.affine_only) parts.push_back("z=0");
  for (const Place& q : chart.excluded) parts.push_back(place_label(curve, q));
  if (parts.empty()) return s;
  s += " - {";
  for (std::size_t i = 0; i < parts.size(); ++i) s += (i ? ", " : "") + parts[i];
  return s + "}";
}

Chart parse_chart(const Curve& curve, const std::string& text) {
  const std::string t = trim(text);
  Chart ch;
  if (t == "X") return ch;
  if (t.rfind("X - {", 0) != 0 || t.back() != '}') raise(ErrorCode::SyntaxError, "bad chart '" + text + "'");
  std::string body = t.substr(5, t.size() - 6);
  std::vector<std::string> items;
  // Labels contain ':' but never ", ".
  std::size_t pos = 0;
  while (pos <= body.size()) {
    const auto next = body.find(", ", pos);
    items.push_back(trim(body.substr(pos, next == std::string::npos ? std::string::npos : next - pos)));
    if (next == std::string::npos) break;
    pos = next + 2;
  }
  for (const std::string& it : items) {
    if (it == "z=0") ch.affine_only = true;
    else ch.excluded.push_back(parse_place(curve, it));
  }
  return ch;
}

Chart intersect(const Chart& a, const Chart& b) {
  Chart c = a;
  c.affine_only = a.affine_only || b.affine_only;
  for (const Place& q : b.excluded)
    if (!std::any_of(c.excluded.begin(), c.excluded.end(), [&](const Place& e) { return e == q; })) c.excluded.push_back(q);
  return c;
}

std::vector<RatFunc> char_poly(const FFElem& f) { return berkowitz(mult_matrix(f), f.p()); }

std::optional<std::string> regularity_failure(const FFElem& f, const Chart& chart) {
  if (f.is_zero()) return std::nullopt;
  const CurvePtr& c = f.curve();
  const fp_t p = c->p();
  const bool plane = c->kind() != CurveKind::P1Marked;
  // Finite x-values where f or y may fail to be integral.
  UPoly special = f.den();
  if (plane)
    for (const RatFunc& k : c->ypow_d()) special = special * k.den() / gcd(special, k.den());
  std::optional<std::vector<RatFunc>> cp;
  auto poly = [&]() -> const std::vector<RatFunc>& {
    if (!cp) cp = char_poly(f);
    return *cp;
  };
  auto check_fiber = [&](std::optional<fp_t> x0) -> std::optional<std::string> {
    const std::string where = x0 ? "x=" + std::to_string(*x0) : std::string("x=inf");
    Fiber fb = fiber_over(c, x0);
    if (fb.complete) {
      for (const Place& q : fb.places)
        if (!chart.excludes(q) && valuation(f, q) < 0) return "pole at " + place_label(*c, q);
      return std::nullopt;
    }
    const auto& cpoly = poly();
    const bool integral = std::all_of(cpoly.begin(), cpoly.end(), [&](const RatFunc& k) {
      return x0 ? integral_at_root(k, *x0) : integral_at_infinity(k);
    });
    if (integral) return std::nullopt;
    // Over x = inf every place lies on the line at infinity of a plane model.
    if (!x0 && plane && chart.affine_only) return std::nullopt;
    return "pole over " + where + " at a place that is not F_p-rational";
  };
  UPoly rest = special;
  for (fp_t x0 : rational_roots(special)) {
    if (auto e = check_fiber(x0)) return e;
    const UPoly lin = UPoly(p, {fp_neg(x0, p), 1});
    while (!rest.is_zero() && (rest % lin).is_zero()) rest = rest / lin;
  }
  if (!rest.is_constant()) {
    for (const RatFunc& k : poly())
      if (!gcd(k.den(), rest).is_constant()) return "pole above an irreducible factor of degree > 1";
  }
  if (plane || !chart.affine_only) {
    if (auto e = check_fiber(std::nullopt)) return e;
  }
  return std::nullopt;
}

bool is_regular_on(const FFElem& f, const Chart& chart) { return !regularity_failure(f, chart); }

bool is_unit_on(const FFElem& f, const Chart& chart) {
  return !f.is_zero() && is_regular_on(f, chart) && is_regular_on(f.inverse(), chart);
}

FFElem frobenius_pullback(const FFElem& h) { return h.pow(h.p()); }

std::vector<ChartSpec> default_cover(const GeneralizedTangoCurve& g) {
  const CurvePtr& c = g.curve;
  if (g.n_divisor.size() != 1) raise(ErrorCode::InvalidArgument, "default cover needs N supported at one place");
  const auto& [label, m] = *g.n_divisor.begin();
  const Place q = parse_place(*c, label);
  if (q.kind != Place::Kind::Affine) raise(ErrorCode::InvalidArgument, "default cover needs an affine support point");
  ChartSpec u1{"U1", Chart{{q}, false}, c->one()};
  ChartSpec u2{"U2", Chart{{}, true}, (c->x() - c->constant(static_cast<long long>(q.x))).pow(-m)};
  return {u1, u2};
}

namespace {

// A function of valuation 1 at q among simple coordinate candidates.
std::optional<FFElem> uniformizer(const CurvePtr& c, const Place& q) {
  std::vector<FFElem> cands;
  if (q.kind == Place::Kind::Affine) {
    cands.push_back(c->x() - c->constant(static_cast<long long>(q.x)));
    cands.push_back(c->y() - c->constant(static_cast<long long>(q.y)));
  } else {
    cands.push_back(c->x().inverse());
    cands.push_back(c->y().inverse());
    cands.push_back(c->x() * c->y().inverse() - c->constant(static_cast<long long>(q.x)));
  }
  for (const FFElem& u : cands)
    if (!u.is_zero() && valuation(u, q) == 1) return u;
  return std::nullopt;
}

// Subtracts p-th powers c pi^m (p | m < 0) until t is regular at q.
FFElem kill_poles(FFElem t, const Place& q, FFElem& correction) {
  const CurvePtr& c = t.curve();
  const fp_t p = c->p();
  for (;;) {
    if (t.is_zero()) return t;
    const int v = valuation(t, q);
    if (v >= 0) return t;
    if (v % static_cast<int>(p) != 0)
      raise(ErrorCode::NotExactOnChart, "pole of order " + std::to_string(-v) + " not divisible by p at " + place_label(*c, q));
    auto pi = uniformizer(c, q);
    if (!pi) raise(ErrorCode::NotExactOnChart, "no coordinate uniformizer at " + place_label(*c, q));
    const fp_t lead_t = series_expand(t, q, 1).leading();
    const fp_t lead_pi = series_expand(*pi, q, 1).leading();
    // pi^v has leading coefficient lead_pi^v.
    const fp_t coef = fp_mul(lead_t, fp_pow(lead_pi, static_cast<std::uint64_t>(-v), p), p);
    const FFElem term = pi->pow(v).scaled(coef);
    correction += pi->pow(v / static_cast<int>(p)).scaled(coef);
    t -= term;
  }
}

}  // namespace

SurfaceGluingData build_surface(const GeneralizedTangoCurve& g, const std::vector<ChartSpec>& cover) {
  const CurvePtr& c = g.curve;
  const fp_t p = c->p();
  if (g.index != 1) raise(ErrorCode::PremiseViolated, "the surface construction needs index 1");
  const long long l = degree(g.n_divisor);
  const long long two_g_2 = 2LL * c->genus() - 2;
  if (l * static_cast<long long>(p) * (p - 1) != two_g_2)
    raise(ErrorCode::PremiseViolated, "l p (p-1) = " + std::to_string(l * p * (p - 1)) + " differs from 2g-2 = " + std::to_string(two_g_2));
  if (cover.empty()) raise(ErrorCode::InvalidArgument, "empty cover");
  SurfaceGluingData data;
  data.curve = c;
  data.f = g.cert.f;
  data.n_divisor = g.n_divisor;
  std::vector<Place> support;
  for (const auto& [label, m] : g.n_divisor) support.push_back(parse_place(*c, label));
  const FFElem df = g.cert.f.derivative();
  for (const ChartSpec& spec : cover) {
    if (spec.n.curve() != c) raise(ErrorCode::CurveMismatch, "chart generator on another curve");
    // n generates O(N) on the chart: div(n) = -N there.
    Chart off_support = spec.domain;
    for (const Place& q : support)
      if (!spec.domain.excludes(q)) off_support.excluded.push_back(q);
    if (!is_unit_on(spec.n, off_support)) raise(ErrorCode::UnitFailure, "generator of N is not a unit on " + spec.name + " away from N");
    for (const auto& [label, m] : g.n_divisor) {
      const Place q = parse_place(*c, label);
      if (!spec.domain.excludes(q) && valuation(spec.n, q) != -m)
        raise(ErrorCode::UnitFailure, "generator of N on " + spec.name + " has the wrong order at " + label);
    }
    const FFElem weight = frobenius_pullback(spec.n.pow(static_cast<long long>(p) - 1));
    if (!exact_primitive(weight * df)) raise(ErrorCode::NotExactOnChart, "form is not exact on " + spec.name);
    SurfaceChart sc{spec.name, spec.domain, spec.n, weight * g.cert.f, c->zero()};
    for (const Place& q : rational_places(*c))
      if (!spec.domain.excludes(q)) sc.t = kill_poles(sc.t, q, sc.correction);
    if (auto e = regularity_failure(sc.t, spec.domain)) raise(ErrorCode::NotExactOnChart, "t on " + spec.name + ": " + *e);
    data.charts.push_back(std::move(sc));
  }
  for (int a = 0; a < static_cast<int>(data.charts.size()); ++a)
    for (int b = 0; b < static_cast<int>(data.charts.size()); ++b) {
      if (a == b) continue;
      const SurfaceChart& ca = data.charts[a];
      const SurfaceChart& cb = data.charts[b];
      const Chart ov = intersect(ca.domain, cb.domain);
      SurfaceOverlap o;
      o.a = a;
      o.b = b;
      o.u = ca.n * cb.n.inverse();
      if (!is_unit_on(o.u, ov)) raise(ErrorCode::UnitFailure, "u_" + ca.name + cb.name + " is not a unit on the overlap");
      const FFElem big_r = frobenius_pullback(o.u.pow(static_cast<long long>(p) - 1)) * cb.t - ca.t;
      auto root = big_r.pth_root();
      if (!root) raise(ErrorCode::NotExactOnChart, "transition of t is not a p-th power");
      o.r = *root;
      if (auto e = regularity_failure(o.r, ov)) raise(ErrorCode::NotExactOnChart, "r_" + ca.name + cb.name + ": " + *e);
      data.overlaps.push_back(std::move(o));
    }
  return data;
}

CocycleReport validate_cocycle(const SurfaceGluingData& data) {
  CocycleReport rep;
  const CurvePtr& c = data.curve;
  const fp_t p = c->p();
  auto fail = [&](const std::string& s) {
    rep.ok = false;
    rep.violations.push_back(s);
  };
  const int n = static_cast<int>(data.charts.size());
  const FFElem df = data.f.derivative();
  for (const SurfaceChart& ch : data.charts) {
    if (auto e = regularity_failure(ch.t, ch.domain)) fail("t_" + ch.name + " not regular: " + *e);
    const FFElem expect = frobenius_pullback(ch.n.pow(static_cast<long long>(p) - 1)) * df;
    if (ch.t.derivative() != expect) fail("dt_" + ch.name + " != F*(n^{p-1}) df");
  }
  std::map<std::pair<int, int>, const SurfaceOverlap*> by;
  for (const SurfaceOverlap& o : data.overlaps) {
    if (o.a < 0 || o.b < 0 || o.a >= n || o.b >= n || o.a == o.b) {
      fail("overlap with bad chart indices");
      continue;
    }
    by[{o.a, o.b}] = &o;
  }
  auto name = [&](int a, int b) { return data.charts[a].name + data.charts[b].name; };
  // Identity transition on the diagonal.
  auto u_of = [&](int a, int b) { return a == b ? c->one() : by.at({a, b})->u; };
  auto r_of = [&](int a, int b) { return a == b ? c->zero() : by.at({a, b})->r; };
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      if (a == b) continue;
      if (!by.count({a, b})) {
        fail("missing overlap " + name(a, b));
        continue;
      }
      const SurfaceOverlap& o = *by.at({a, b});
      const SurfaceChart& ca = data.charts[a];
      const SurfaceChart& cb = data.charts[b];
      const Chart ov = intersect(ca.domain, cb.domain);
      if (!is_unit_on(o.u, ov)) fail("u_" + name(a, b) + " is not a unit on the overlap");
      if (auto e = regularity_failure(o.r, ov)) fail("r_" + name(a, b) + " not regular: " + *e);
      const FFElem w = frobenius_pullback(o.u.pow(static_cast<long long>(p) - 1));
      if (ca.t.derivative() != w * cb.t.derivative()) fail("dt_" + ca.name + " != F*(u^{p-1}) dt_" + cb.name);
      if (ca.t != w * cb.t - frobenius_pullback(o.r)) fail("t_" + ca.name + " != F*(u^{p-1}) t_" + cb.name + " - F*(r)");
    }
  if (!rep.ok) return rep;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int g = 0; g < n; ++g) {
        const std::string tag = data.charts[a].name + "," + data.charts[b].name + "," + data.charts[g].name;
        if (u_of(a, g) != u_of(a, b) * u_of(b, g)) fail("u cocycle fails on (" + tag + ")");
        // t_a = U_ab (U_bg t_g - R_bg) - R_ab gives r_ag = u_ab^{p-1} r_bg + r_ab.
        if (r_of(a, g) != u_of(a, b).pow(static_cast<long long>(p) - 1) * r_of(b, g) + r_of(a, b))
          fail("r compatibility fails on (" + tag + ")");
      }
  return rep;
}

FiberProbeReport fiber_smoothness_probe(const SurfaceGluingData& data, std::size_t count, std::uint64_t seed) {
  const CurvePtr& c = data.curve;
  const fp_t p = c->p();
  FiberProbeReport rep;
  std::vector<FiberSample> all;
  std::set<std::string> seen_bases;
  for (const SurfaceChart& ch : data.charts) {
    for (const Place& b : rational_places(*c)) {
      if (ch.domain.excludes(b)) continue;
      const std::string base = place_label(*c, b);
      if (!seen_bases.insert(base).second) continue;
      // t(b) and dt/ds(b) in a local uniformizer s at b.
      TruncSeries s = expand_upto(ch.t, b, 2, false);
      const fp_t t0 = s.coeff(0);
      const fp_t t1 = s.coeff(1);
      auto eq = [&](fp_t x, fp_t y, fp_t z) {
        fp_t lhs = fp_mul(fp_pow(y, p - 1, p), z, p);
        fp_t rhs = fp_add(fp_pow(x, p, p), fp_mul(t0, fp_pow(z, p, p), p), p);
        return lhs == rhs;
      };
      auto add = [&](fp_t x, fp_t y, fp_t z) {
        if (!eq(x, y, z)) return;
        // Partials of y^{p-1} z - x^p - t(s) z^p: G_x = 0, G_y, G_z, G_s.
        const fp_t gy = fp_mul(fp_mul(p - 1, fp_pow(y, p - 2, p), p), z, p);
        const fp_t gz = fp_pow(y, p - 1, p);
        const fp_t gs = fp_neg(fp_mul(t1, fp_pow(z, p, p), p), p);
        all.push_back(FiberSample{ch.name, base, x, y, z, gy != 0 || gz != 0 || gs != 0});
      };
      for (fp_t x = 0; x < p; ++x)
        for (fp_t y = 0; y < p; ++y) add(x, y, 1);
      for (fp_t x = 0; x < p; ++x) add(x, 1, 0);
      add(1, 0, 0);
    }
  }
  rep.distinct_points = all.size();
  for (const FiberSample& s : all)
    if (!s.smooth) ++rep.singular_points;
  if (all.empty()) return rep;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, all.size() - 1);
  for (std::size_t i = 0; i < count; ++i) {
    const FiberSample& s = all[pick(rng)];
    rep.samples.push_back(s);
    if (!s.smooth) ++rep.singular_samples;
  }
  return rep;
}

PathologyWitness pathology_witness(const GeneralizedTangoCurve& g, int height) {
  const CurvePtr& c = g.curve;
  const fp_t p = c->p();
  const long long genus = c->genus();
  PathologyWitness w;
  const long long deg = degree(g.n_divisor);
  if (deg < 0) {
    w.exact = true;
    return w;
  }
  const bool effective = std::all_of(g.n_divisor.begin(), g.n_divisor.end(), [](const auto& kv) { return kv.second >= 0; });
  // Riemann-Roch above 2g-2, Clifford for special divisors.
  w.dim_upper = deg > 2 * genus - 2 ? deg - genus + 1 : deg / 2 + 1;
  if (effective) {
    w.dim_lower = 1;
    w.sections.push_back(c->one());
  }
  if (g.n_divisor.size() == 1 && effective) {
    const auto& [label, m] = *g.n_divisor.begin();
    const Place q = parse_place(*c, label);
    const Chart away{{q}, false};
    // Monomials regular away from q, echelonized by pole order at q.
    std::map<int, std::pair<std::vector<fp_t>, FFElem>> rows;  // pole order -> (polar coefficients, function)
    const int depth = static_cast<int>(2 * genus + 1);
    for (int a = -height; a <= height; ++a)
      for (int b = -height; b <= height; ++b) {
        if (c->kind() == CurveKind::P1Marked && b != 0) continue;
        FFElem f = c->x().pow(a) * c->y().pow(b);
        if (f.is_constant() || !is_regular_on(f, away)) continue;
        if (valuation(f, q) < -depth) continue;
        TruncSeries s = expand_upto(f, q, 0, false);
        std::vector<fp_t> polar(depth + 1, 0);
        for (int j = 1; j <= depth; ++j) polar[j] = s.coeff(-j);
        // Reduce against rows with the same leading pole order.
        for (;;) {
          int lead = 0;
          for (int j = depth; j >= 1; --j)
            if (polar[j] != 0) {
              lead = j;
              break;
            }
          if (lead == 0) break;
          auto it = rows.find(lead);
          if (it == rows.end()) {
            rows.emplace(lead, std::make_pair(polar, f));
            break;
          }
          const fp_t k = fp_mul(polar[lead], fp_inv(it->second.first[lead], p), p);
          for (int j = 1; j <= depth; ++j) polar[j] = fp_sub(polar[j], fp_mul(k, it->second.first[j], p), p);
          f -= it->second.second.scaled(k);
        }
      }
    std::set<long long> orders;
    for (const auto& [ord, row] : rows) orders.insert(ord);
    w.pole_orders.assign(orders.begin(), orders.end());
    for (const auto& [ord, row] : rows)
      if (ord <= m) w.sections.push_back(row.second);
    // Semigroup generated by the achieved orders, up to 2g.
    std::vector<bool> in(static_cast<std::size_t>(2 * genus + 1), false);
    in[0] = true;
    for (long long k = 1; k <= 2 * genus; ++k)
      for (long long o : orders)
        if (o <= k && in[k - o]) in[k] = true;
    long long gaps = 0;
    for (long long k = 1; k <= 2 * genus; ++k)
      if (!in[k]) ++gaps;
    long long count = 0;
    for (long long k = 0; k <= std::min<long long>(m, 2 * genus); ++k)
      if (in[k]) ++count;
    if (m > 2 * genus) count += m - 2 * genus;
    w.dim_lower = std::max(w.dim_lower, count);
    if (gaps == genus) {
      w.exact = true;
      w.dim_upper = w.dim_lower;
    }
  }
  if (w.dim_lower == w.dim_upper) w.exact = true;
  w.conclusion = w.dim_lower > 0;
  return w;
}

std::string render_surface(const SurfaceGluingData& data) {
  const Curve& c = *data.curve;
  std::ostringstream os;
  os << "surface\n";
  os << "curve = " << c.descriptor() << "\n";
  os << "f = " << data.f.to_string() << "\n";
  os << "N = " << to_string(data.n_divisor) << "\n";
  os << "fiber = " << data.fiber_equation << "\n";
  for (const SurfaceChart& ch : data.charts) {
    os << "chart " << ch.name << " = " << chart_descriptor(c, ch.domain) << "\n";
    os << "n " << ch.name << " = " << ch.n.to_string() << "\n";
    os << "t " << ch.name << " = " << ch.t.to_string() << "\n";
    os << "k " << ch.name << " = " << ch.correction.to_string() << "\n";
  }
  for (const SurfaceOverlap& o : data.overlaps) {
    const std::string ab = data.charts[o.a].name + " " + data.charts[o.b].name;
    os << "u " << ab << " = " << o.u.to_string() << "\n";
    os << "r " << ab << " = " << o.r.to_string() << "\n";
  }
  return os.str();
}

namespace {

struct KeyedLine {
  int lineno = 0;
  std::vector<std::string> keys;
  std::string value;
};

std::vector<KeyedLine> keyed_lines(const std::string& text, const std::string& header) {
  std::vector<KeyedLine> out;
  std::istringstream is(text);
  std::string line;
  int no = 0;
  bool seen_header = header.empty();
  while (std::getline(is, line)) {
    ++no;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    if (!seen_header) {
      if (t != header) raise(ErrorCode::SyntaxError, "line " + std::to_string(no) + ": expected '" + header + "'");
      seen_header = true;
      continue;
    }
    const auto eq = t.find(" = ");
    if (eq == std::string::npos) raise(ErrorCode::SyntaxError, "line " + std::to_string(no) + ": expected 'key = value'");
    KeyedLine kl;
    kl.lineno = no;
    std::istringstream ks(t.substr(0, eq));
    std::string k;
    while (ks >> k) kl.keys.push_back(k);
    kl.value = trim(t.substr(eq + 3));
    out.push_back(std::move(kl));
  }
  if (!seen_header) raise(ErrorCode::SyntaxError, "missing '" + header + "' header");
  return out;
}

}  // namespace

SurfaceGluingData parse_surface(const std::string& text) {
  auto lines = keyed_lines(text, "surface");
  SurfaceGluingData data;
  std::map<std::string, int> index;
  auto at = [&](const KeyedLine& kl, const std::string& msg) {
    raise(ErrorCode::SyntaxError, "line " + std::to_string(kl.lineno) + ": " + msg);
  };
  for (const KeyedLine& kl : lines) {
    const std::string& k = kl.keys.empty() ? std::string() : kl.keys[0];
    if (k == "curve") {
      data.curve = parse_curve(kl.value);
      continue;
    }
    if (!data.curve) at(kl, "curve line must come first");
    const CurvePtr& c = data.curve;
    if (k == "f" && kl.keys.size() == 1) data.f = parse_ffelem(c, kl.value);
    else if (k == "N" && kl.keys.size() == 1) data.n_divisor = parse_divisor(*c, kl.value);
    else if (k == "fiber" && kl.keys.size() == 1) data.fiber_equation = kl.value;
    else if (k == "chart" && kl.keys.size() == 2) {
      if (index.count(kl.keys[1])) raise(ErrorCode::SemanticError, "chart " + kl.keys[1] + " repeated");
      index[kl.keys[1]] = static_cast<int>(data.charts.size());
      data.charts.push_back(SurfaceChart{kl.keys[1], parse_chart(*c, kl.value), c->one(), c->zero(), c->zero()});
    } else if ((k == "n" || k == "t" || k == "k") && kl.keys.size() == 2) {
      auto it = index.find(kl.keys[1]);
      if (it == index.end()) at(kl, "unknown chart " + kl.keys[1]);
      SurfaceChart& ch = data.charts[it->second];
      FFElem v = parse_ffelem(c, kl.value);
      (k == "n" ? ch.n : k == "t" ? ch.t : ch.correction) = v;
    } else if ((k == "u" || k == "r") && kl.keys.size() == 3) {
      auto ia = index.find(kl.keys[1]);
      auto ib = index.find(kl.keys[2]);
      if (ia == index.end() || ib == index.end()) at(kl, "unknown chart in overlap");
      auto it = std::find_if(data.overlaps.begin(), data.overlaps.end(),
                             [&](const SurfaceOverlap& o) { return o.a == ia->second && o.b == ib->second; });
      if (it == data.overlaps.end()) {
        data.overlaps.push_back(SurfaceOverlap{ia->second, ib->second, c->one(), c->zero()});
        it = std::prev(data.overlaps.end());
      }
      (k == "u" ? it->u : it->r) = parse_ffelem(c, kl.value);
    } else {
      at(kl, "unknown key '" + k + "'");
    }
  }
  if (!data.curve) raise(ErrorCode::SyntaxError, "missing curve line");
  if (data.f.curve() != data.curve) raise(ErrorCode::SyntaxError, "missing f line");
  return data;
}

std::string render_generalized_tango(const GeneralizedTangoCurve& g) {
  std::ostringstream os;
  os << "curve = " << g.curve->descriptor() << "\n";
  os << "f = " << g.cert.f.to_string() << "\n";
  os << "N = " << to_string(g.n_divisor) << "\n";
  os << "index = " << g.index << "\n";
  os << "nu = " << g.nu.to_string() << "\n";
  return os.str();
}

GeneralizedTangoCurve parse_generalized_tango(const std::string& text) {
  auto lines = keyed_lines(text, "");
  CurvePtr c;
  std::optional<FFElem> f, nu;
  std::optional<Divisor> n;
  int index = 1;
  for (const KeyedLine& kl : lines) {
    if (kl.keys.size() != 1) raise(ErrorCode::SyntaxError, "line " + std::to_string(kl.lineno) + ": bad key");
    const std::string& k = kl.keys[0];
    if (k == "curve") {
      c = parse_curve(kl.value);
      continue;
    }
    if (!c) raise(ErrorCode::SyntaxError, "line " + std::to_string(kl.lineno) + ": curve line must come first");
    if (k == "f") f = parse_ffelem(c, kl.value);
    else if (k == "N") n = parse_divisor(*c, kl.value);
    else if (k == "nu") nu = parse_ffelem(c, kl.value);
    else if (k == "index") {
      try {
        index = std::stoi(kl.value);
      } catch (const std::exception&) {
        raise(ErrorCode::SyntaxError, "line " + std::to_string(kl.lineno) + ": bad index");
      }
    } else {
      raise(ErrorCode::SyntaxError, "line " + std::to_string(kl.lineno) + ": unknown key '" + k + "'");
    }
  }
  if (!c || !f || !n) raise(ErrorCode::SyntaxError, "generalized Tango file needs curve, f and N");
  TangoCertificate cert = certify_tango_structure(c, *f);
  return build_generalized_tango(cert, *n, index, nu ? *nu : c->one());
}

}  // namespace dormant
