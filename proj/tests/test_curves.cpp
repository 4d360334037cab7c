#include <doctest.h>

#include <functional>
#include <tuple>

#include "dormant/branch.hpp"
#include "dormant/curve.hpp"
#include "dormant/error.hpp"
#include "oracles.hpp"

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

std::vector<CurvePtr> sample_curves() {
  return {Curve::p1(5, {Mark::at(0), Mark::at(1), Mark::infinity()}), Curve::weierstrass(5, 3, 0),
          Curve::weierstrass(7, 0, 5), Curve::raynaud(5, 1), Curve::raynaud(3, 2)};
}

}  // namespace

TEST_CASE("curve descriptors parse and round trip") {
  for (const char* d : {"p1 p=5 marks=0,1,inf", "ell p=7 a=3 b=5", "raynaud p=5 l=1", "p1 p=3 marks="}) {
    CHECK(parse_curve(d)->descriptor() == d);
  }
  CHECK(code_of([] { parse_curve("p1 p=9 marks=0"); }) == ErrorCode::SemanticError);
  CHECK(code_of([] { parse_curve("p1 p=5 marks=0,5"); }) == ErrorCode::SemanticError);
  CHECK(code_of([] { parse_curve("ell p=5 a=0 b=0"); }) == ErrorCode::SemanticError);
  CHECK(code_of([] { parse_curve("hyper p=5"); }) == ErrorCode::SyntaxError);
  CHECK(code_of([] { parse_curve("ell p=5 a=x b=1"); }) == ErrorCode::SyntaxError);
}

TEST_CASE("genera of the shipped models") {
  CHECK(Curve::p1(5, {})->genus() == 0);
  CHECK(Curve::weierstrass(5, 3, 0)->genus() == 1);
  CHECK(Curve::raynaud(5, 1)->genus() == 6);
  CHECK(Curve::raynaud(3, 2)->genus() == 10);
}

TEST_CASE("Hasse invariant agrees with point counting") {
  for (fp_t p : {5u, 7u, 11u}) {
    for (long long a = 0; a < p; ++a)
      for (long long b = 0; b < p; ++b) {
        if ((4 * a * a * a + 27 * b * b) % p == 0) continue;
        CHECK(is_ordinary(*Curve::weierstrass(p, a, b)).ordinary == oracle::ordinary_by_count(p, a, b));
      }
  }
  for (auto [p, a, b] : {std::tuple{5u, 3, 0}, {5u, 3, 2}, {5u, 3, 3}, {7u, 0, 5}, {7u, 3, 5}, {7u, 5, 5}})
    CHECK(is_ordinary(*Curve::weierstrass(p, a, b)).ordinary);
  CHECK_FALSE(is_ordinary(*Curve::weierstrass(3, 1, 1)).ordinary);
}

TEST_CASE("function field arithmetic on every model") {
  std::mt19937_64 rng(21);
  for (const CurvePtr& c : sample_curves()) {
    CAPTURE(c->descriptor());
    for (int t = 0; t < 6; ++t) {
      const FFElem f = oracle::random_nonzero_elem(rng, c, 2), g = oracle::random_elem(rng, c, 2);
      CHECK(f * f.inverse() == c->one());
      CHECK(f * g == g * f);
      CHECK((f * g).derivative() == f.derivative() * g + f * g.derivative());
      CHECK(f.frobenius() == f.pow(c->p()));
      CHECK(f.frobenius().pth_root() == std::optional<FFElem>(f));
      CHECK(parse_ffelem(c, f.to_string()) == f);
    }
    if (c->kind() != CurveKind::P1Marked) CHECK(c->y().derivative() == c->dy());
  }
  const CurvePtr e = Curve::weierstrass(7, 3, 5);
  CHECK(e->y() * e->y() == e->from_ratfunc(RatFunc(e->cubic())));
  CHECK(e->y().scaled(2) * e->dy() == e->from_ratfunc(RatFunc(e->cubic().derivative())));
}

TEST_CASE("branches satisfy the curve equation at every rational place") {
  for (const CurvePtr& c : sample_curves()) {
    if (c->kind() == CurveKind::P1Marked) continue;
    for (const Place& pl : rational_places(*c)) {
      CAPTURE(place_label(*c, pl));
      const Branch b = branch_at(c, pl, 16);
      TruncSeries residual;
      if (c->kind() == CurveKind::Weierstrass) {
        residual = b.y() * b.y() - eval_poly(c->cubic(), b.x());
      } else {
        const int lp = c->l() * static_cast<int>(c->p());
        residual = b.x().pow(lp) - b.x() * b.y().pow(lp - 1) - b.y();
      }
      CHECK(residual.agrees_with(TruncSeries::zero(c->p(), residual.prec())));
      CHECK(parse_place(*c, place_label(*c, pl)) == pl);
      CHECK(on_curve(*c, pl));
    }
  }
}

TEST_CASE("Newton branch matches the fixed-point oracle on the Raynaud curve (5, 1)") {
  const CurvePtr c = Curve::raynaud(5, 1);
  const Branch b = branch_at(c, Place::affine(0, 0), 40);
  REQUIRE(b.uniformizer() == "x");
  const auto expected = oracle::raynaud51_branch(40);
  for (int i = 0; i < 40 && i < b.y().prec(); ++i) CHECK(b.y().coeff(i) == expected[i]);
  CHECK(expected[21] == 4);
}

TEST_CASE("divisors of coordinate functions and of the trivializing form") {
  const CurvePtr e = Curve::weierstrass(5, 3, 0);
  const auto places = rational_places(*e);
  const DivisorReport dx = divisor_of_function(e->x(), places);
  CHECK(dx.complete);
  CHECK(dx.degree == 0);
  CHECK(dx.divisor.at("[0:0:1]") == 2);
  CHECK(dx.divisor.at("[0:1:0]") == -2);
  const DivisorReport eta = divisor_of_differential(e->eta(), places);
  CHECK(eta.complete);
  CHECK(eta.divisor.empty());
  const CurvePtr r = Curve::raynaud(5, 1);
  const DivisorReport dr = divisor_of_differential(r->eta(), rational_places(*r));
  CHECK(dr.complete);
  CHECK(dr.degree == 10);
}

TEST_CASE("residue theorem on the line") {
  std::mt19937_64 rng(22);
  for (fp_t p : {5u, 7u}) {
    const CurvePtr c = Curve::p1(p, {});
    const auto places = rational_places(*c);
    for (int t = 0; t < 20; ++t) {
      UPoly den = UPoly::constant(p, 1);
      const int k = 1 + static_cast<int>(rng() % 3);
      for (int i = 0; i < k; ++i) den = den * (UPoly::x(p) - UPoly::constant(p, oracle::random_fp(rng, p)));
      const FFElem h = c->from_ratfunc(RatFunc::normalize(oracle::random_poly(rng, p, 3), den));
      fp_t sum = 0;
      for (const Place& pl : places) sum = fp_add(sum, residue(h, pl), p);
      CHECK(sum == 0);
    }
  }
}

TEST_CASE("valuation is additive") {
  std::mt19937_64 rng(23);
  const CurvePtr c = Curve::weierstrass(7, 0, 5);
  const auto places = rational_places(*c);
  for (int t = 0; t < 10; ++t) {
    const FFElem f = oracle::random_nonzero_elem(rng, c, 2), g = oracle::random_nonzero_elem(rng, c, 2);
    for (const Place& pl : places) CHECK(valuation(f * g, pl) == valuation(f, pl) + valuation(g, pl));
  }
  CHECK_THROWS_AS(valuation(c->zero(), places[0]), Error);
}
