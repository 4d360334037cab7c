#include <doctest.h>

#include "dormant/branch.hpp"
#include "dormant/cartier.hpp"
#include "oracles.hpp"

using namespace dormant;

namespace {

std::vector<CurvePtr> models() {
  return {Curve::p1(5, {Mark::at(0), Mark::infinity()}), Curve::p1(7, {}), Curve::weierstrass(5, 3, 0),
          Curve::weierstrass(7, 0, 5), Curve::raynaud(5, 1), Curve::raynaud(3, 2)};
}

}  // namespace

TEST_CASE("Cartier kills exact forms") {
  std::mt19937_64 rng(41);
  for (const CurvePtr& c : models()) {
    CAPTURE(c->descriptor());
    for (int t = 0; t < 20; ++t) {
      const FFElem f = oracle::random_elem(rng, c, 2);
      CHECK(cartier(f.derivative()).is_zero());
      CHECK(is_exact(f.derivative()));
      const auto prim = exact_primitive(f.derivative());
      REQUIRE(prim);
      CHECK(prim->derivative() == f.derivative());
    }
  }
}

TEST_CASE("Cartier is p^{-1}-linear") {
  std::mt19937_64 rng(42);
  for (const CurvePtr& c : models()) {
    CAPTURE(c->descriptor());
    for (int t = 0; t < 50; ++t) {
      const FFElem f = oracle::random_elem(rng, c, 1), w = oracle::random_elem(rng, c, 2);
      CHECK(cartier(f.frobenius() * w) == f * cartier(w));
      const FFElem v = oracle::random_elem(rng, c, 1);
      CHECK(cartier(w + v) == cartier(w) + cartier(v));
    }
  }
}

TEST_CASE("fixed forms are exactly the flat rank-one connections") {
  for (fp_t p : {3u, 5u, 7u}) {
    std::mt19937_64 rng(43 + p);
    for (const CurvePtr& c : {Curve::p1(p, {}), Curve::weierstrass(p, 1, 1)}) {
      int fixed = 0;
      for (int t = 0; t < 100; ++t) {
        FFElem h = oracle::random_elem(rng, c, 2);
        if (t % 2 == 0) {
          const FFElem f = oracle::random_nonzero_elem(rng, c, 2);
          h = f.derivative() / f;
        }
        const bool is_fixed = is_cartier_fixed(h);
        CHECK(is_fixed == p_curvature_rank1(h).is_zero());
        fixed += is_fixed ? 1 : 0;
      }
      CHECK(fixed >= 50);
    }
  }
}

TEST_CASE("Cartier on the line matches the monomial rule") {
  for (fp_t p : {3u, 5u, 7u}) {
    const CurvePtr c = Curve::p1(p, {});
    for (int k = -2 * static_cast<int>(p); k <= 3 * static_cast<int>(p); ++k) {
      const FFElem h = c->x().pow(k);
      CHECK(cartier(h) == c->from_ratfunc(oracle::cartier_monomial(p, k)));
      CHECK(cartier_p1(h) == cartier(h));
    }
    std::mt19937_64 rng(44 + p);
    for (int t = 0; t < 20; ++t) {
      const FFElem h = oracle::random_elem(rng, c, 3);
      CHECK(cartier_p1(h) == cartier(h));
    }
  }
}

TEST_CASE("Cartier commutes with local expansion") {
  std::mt19937_64 rng(45);
  for (const CurvePtr& c : {Curve::weierstrass(5, 3, 0), Curve::raynaud(5, 1)}) {
    for (int t = 0; t < 5; ++t) {
      const FFElem h = oracle::random_nonzero_elem(rng, c, 1);
      const FFElem g = cartier(h);
      for (const Place& pl : rational_places(*c)) {
        const Branch b = branch_at(c, pl, 60);
        const TruncSeries local = cartier_series(b.expand_form(h));
        if (g.is_zero()) {
          CHECK(local.agrees_with(TruncSeries::zero(c->p(), local.prec())));
          continue;
        }
        // The twist has the same equations, so g dx expands with the same numeric data.
        const TruncSeries expected = b.expand_form(g);
        const int upto = std::min(local.prec(), expected.prec());
        for (int n = std::min(local.ord(), expected.ord()); n < upto; ++n) CHECK(local.coeff(n) == expected.coeff(n));
      }
    }
  }
}
