#include <doctest.h>

#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "dormant/branch.hpp"
#include "dormant/error.hpp"
#include "dormant/surface.hpp"

using namespace dormant;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error raised");
  return ErrorCode::InvalidArgument;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

GeneralizedTangoCurve shipped_gtc() {
  return parse_generalized_tango(slurp(std::string(DORMANT_SOURCE_DIR) + "/data/raynaud_p3_l2.gtc"));
}

GeneralizedTangoCurve built_gtc() {
  const CurvePtr c = Curve::raynaud(3, 2);
  return build_generalized_tango(certify_tango_structure(c, c->y().inverse()), Divisor{{"[0:0:1]", 3}}, 1, c->one());
}

const SurfaceChart& chart_named(const SurfaceGluingData& d, const std::string& name) {
  for (const SurfaceChart& ch : d.charts)
    if (ch.name == name) return ch;
  FAIL("no chart " << name);
  return d.charts.front();
}

// y^{p-1} z = x^p + t0 z^p, evaluated test-side.
bool on_fiber(fp_t p, fp_t t0, fp_t x, fp_t y, fp_t z) {
  unsigned long long lhs = 1, xp = 1, zp = 1;
  for (fp_t i = 0; i + 1 < p; ++i) lhs = lhs * y % p;
  lhs = lhs * z % p;
  for (fp_t i = 0; i < p; ++i) xp = xp * x % p, zp = zp * z % p;
  return lhs == (xp + t0 * zp) % p;
}

}  // namespace

TEST_CASE("the shipped generalized Tango curve matches the built one") {
  const GeneralizedTangoCurve a = shipped_gtc(), b = built_gtc();
  CHECK(a.curve->descriptor() == b.curve->descriptor());
  CHECK(a.n_divisor == b.n_divisor);
  CHECK(a.l_divisor == b.l_divisor);
  CHECK(a.index == 1);
  CHECK(render_generalized_tango(a) == render_generalized_tango(b));
  CHECK(render_generalized_tango(parse_generalized_tango(render_generalized_tango(a))) == render_generalized_tango(a));
}

TEST_CASE("surface gluing data satisfies the cocycle conditions") {
  const GeneralizedTangoCurve g = built_gtc();
  const SurfaceGluingData data = build_surface(g, default_cover(g));
  const fp_t p = data.curve->p();
  REQUIRE(data.charts.size() == 2);
  CHECK(data.overlaps.size() == 2);
  const CocycleReport rep = validate_cocycle(data);
  CHECK(rep.ok);
  CHECK(rep.violations.empty());

  // Independent recheck on the rendered text: differentiate t_a and t_b directly.
  const SurfaceGluingData back = parse_surface(render_surface(data));
  CHECK(render_surface(back) == render_surface(data));
  const int e = static_cast<int>(p * (p - 1));
  for (const SurfaceOverlap& o : back.overlaps) {
    const SurfaceChart& a = back.charts[static_cast<std::size_t>(o.a)];
    const SurfaceChart& b = back.charts[static_cast<std::size_t>(o.b)];
    CAPTURE(a.name);
    CAPTURE(b.name);
    CHECK(o.u == a.n / b.n);
    CHECK(a.t.derivative() == o.u.pow(e) * b.t.derivative());
    CHECK(a.t == o.u.pow(e) * b.t - o.r.pow(static_cast<int>(p)));
    CHECK(is_unit_on(o.u, intersect(a.domain, b.domain)));
    CHECK(is_regular_on(o.r, intersect(a.domain, b.domain)));
  }
  for (const SurfaceChart& ch : back.charts) {
    CHECK(ch.t.derivative() == ch.n.pow(e) * back.f.derivative());
    CHECK(is_regular_on(ch.t, ch.domain));
  }
}

TEST_CASE("fibers over rational base points are smooth") {
  const GeneralizedTangoCurve g = built_gtc();
  const SurfaceGluingData data = build_surface(g, default_cover(g));
  const fp_t p = data.curve->p();
  const FiberProbeReport probe = fiber_smoothness_probe(data, 100, 7);
  const std::size_t bases = rational_places(*data.curve).size();
  // Each fiber has exactly p affine points and one at z = 0.
  CHECK(probe.distinct_points == (p + 1) * bases);
  CHECK(probe.singular_points == 0);
  CHECK(probe.samples.size() == 100);
  CHECK(probe.singular_samples == 0);
  std::set<std::string> seen;
  for (const FiberSample& s : probe.samples) {
    seen.insert(s.base);
    const SurfaceChart& ch = chart_named(data, s.chart);
    const Place b = parse_place(*data.curve, s.base);
    CHECK_FALSE(ch.domain.excludes(b));
    CAPTURE(s.base);
    const TruncSeries t = series_expand(ch.t, b, 1);
    REQUIRE(t.ord() >= 0);
    CHECK(on_fiber(p, t.ord() == 0 ? t.coeff(0) : 0, s.x, s.y, s.z));
  }
  CHECK(seen.size() <= bases);
  // Same seed, same samples.
  const FiberProbeReport again = fiber_smoothness_probe(data, 100, 7);
  for (std::size_t i = 0; i < probe.samples.size(); ++i) CHECK(again.samples[i].base == probe.samples[i].base);
}

TEST_CASE("a p-th power in place of t makes the fibers singular") {
  const GeneralizedTangoCurve g = built_gtc();
  SurfaceGluingData data = build_surface(g, default_cover(g));
  for (SurfaceChart& ch : data.charts) ch.t = data.curve->x().pow(3);
  const FiberProbeReport probe = fiber_smoothness_probe(data, 50, 1);
  CHECK(probe.singular_points > 0);
  CHECK_FALSE(validate_cocycle(data).ok);
}

TEST_CASE("corrupted gluing data fails the cocycle check") {
  const GeneralizedTangoCurve g = built_gtc();
  const SurfaceGluingData good = build_surface(g, default_cover(g));
  SurfaceGluingData bad_t = good;
  bad_t.charts[0].t += good.curve->one();
  CHECK_FALSE(validate_cocycle(bad_t).ok);
  SurfaceGluingData bad_r = good;
  bad_r.overlaps[0].r += good.curve->x();
  const CocycleReport rep = validate_cocycle(bad_r);
  CHECK_FALSE(rep.ok);
  CHECK_FALSE(rep.violations.empty());
}

TEST_CASE("the pathology witness finds a section of N") {
  const PathologyWitness w = pathology_witness(built_gtc(), 6);
  CHECK(w.exact);
  CHECK(w.dim_lower == w.dim_upper);
  CHECK(w.dim_lower == 1);
  CHECK(w.conclusion);
  REQUIRE_FALSE(w.sections.empty());
  // Sections are regular away from the support point of N.
  const CurvePtr c = Curve::raynaud(3, 2);
  const Chart away = parse_chart(*c, "X - {[0:0:1]}");
  for (const FFElem& s : w.sections) CHECK(is_regular_on(s, away));
}

TEST_CASE("charts parse, print and intersect") {
  const CurvePtr c = Curve::raynaud(3, 2);
  for (const char* s : {"X - {[0:0:1]}", "X - {z=0}", "X - {z=0, [0:0:1]}"}) {
    const Chart ch = parse_chart(*c, s);
    CHECK(chart_descriptor(*c, ch) == s);
  }
  const Chart a = parse_chart(*c, "X - {[0:0:1]}"), b = parse_chart(*c, "X - {z=0}");
  const Chart both = intersect(a, b);
  CHECK(chart_descriptor(*c, both) == "X - {z=0, [0:0:1]}");
  CHECK(both.excludes(parse_place(*c, "[0:0:1]")));
  CHECK_FALSE(a.excludes(parse_place(*c, "[0:1:0]")));
  CHECK(b.excludes(parse_place(*c, "[0:1:0]")));
  CHECK(code_of([&] { parse_chart(*c, "U - {z=0}"); }) == ErrorCode::SyntaxError);
}

TEST_CASE("surface construction premises") {
  GeneralizedTangoCurve g = built_gtc();
  g.index = 2;
  CHECK(code_of([&] { build_surface(g, default_cover(g)); }) == ErrorCode::PremiseViolated);
  const CurvePtr r = Curve::raynaud(5, 1);
  GeneralizedTangoCurve h;
  h.curve = r;
  h.cert = certify_tango_structure(r, r->y().inverse());
  h.l_divisor = h.cert.floor_divisor;
  h.n_divisor = Divisor{{"[0:0:1]", 1}};
  h.nu = r->one();
  CHECK(code_of([&] { build_surface(h, default_cover(h)); }) == ErrorCode::PremiseViolated);
  CHECK(code_of([&] { parse_surface("surface\nf = 1 / 1\n"); }) == ErrorCode::SyntaxError);
  CHECK(code_of([&] { parse_generalized_tango("index = 1\n"); }) == ErrorCode::SyntaxError);
}
