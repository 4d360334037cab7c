#include <doctest.h>

#include <functional>
#include <tuple>

#include "dormant/cartier.hpp"
#include "dormant/enumerate.hpp"
#include "dormant/error.hpp"
#include "dormant/miura.hpp"
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

// Round trip checks for one pre-Tango connection of monodromy mu.
void check_round_trip(const LogConnection& pt, const std::vector<fp_t>& mu) {
  const fp_t p = pt.curve()->p();
  const MiuraGL2Oper m = miura_from_tango(pt);
  CHECK_NOTHROW(check_special(m.conn));
  CHECK(p_curvature(m.conn).is_zero());
  CHECK(oracle::pfold_pcurvature(m.conn.matrix()).is_zero());
  CHECK(is_dormant(m));
  // Sign table: monodromy -eps on the pre-Tango side, class [eps] on the oper side.
  const ExponentVector ev = exponent_of(m);
  REQUIRE(ev.cls.size() == mu.size());
  for (std::size_t k = 0; k < mu.size(); ++k) CHECK(ev.cls[k] == std::vector<fp_t>{0, fp_neg(mu[k], p)});
  CHECK(ev.cls == exponent_class_for_pretango(mu, p).cls);
  CHECK(pretango_of(m) == pt);
}

}  // namespace

TEST_CASE("sign table") {
  CHECK(kPreTangoExponentSign == -1);
  const ExponentVector e = exponent_class_for_pretango({1, 0, 3}, 5);
  CHECK(e.cls == std::vector<std::vector<fp_t>>{{0, 4}, {0, 0}, {0, 2}});
  const ExponentVector f = exponent_vector({{2, 3}, {1, 1}}, 5);
  CHECK(f.cls == std::vector<std::vector<fp_t>>{{0, 1}, {0, 0}});
}

TEST_CASE("round trip on every elliptic pre-Tango structure") {
  for (auto [p, a, b] : {std::tuple{5u, 3, 0}, {5u, 3, 2}, {5u, 3, 3}, {7u, 0, 5}, {7u, 3, 5}, {7u, 5, 5}}) {
    const CurvePtr c = Curve::weierstrass(p, a, b);
    const EnumerationReport rep = count_pretango(c, {});
    REQUIRE(rep.pretango_count == static_cast<long long>(p) - 1);
    for (const LogConnection& pt : rep.pretango_list) check_round_trip(pt, {});
  }
}

TEST_CASE("round trip on every genus-0 pre-Tango structure") {
  for (fp_t p : {3u, 5u, 7u}) {
    for (std::size_t r : {3u, 4u}) {
      std::vector<Mark> marks;
      for (std::size_t i = 0; i + 1 < r; ++i) marks.push_back(Mark::at(static_cast<fp_t>(i)));
      marks.push_back(Mark::infinity());
      const CurvePtr c = Curve::p1(p, marks);
      for (const EnumerationReport& rep : sweep(c, true, 1))
        for (const LogConnection& pt : rep.pretango_list) check_round_trip(pt, rep.monodromy);
    }
  }
}

TEST_CASE("the trivial connection on an ordinary elliptic curve is flat but not dormant") {
  for (auto [p, a, b] : {std::tuple{5u, 3, 0}, {7u, 0, 5}}) {
    const CurvePtr c = Curve::weierstrass(p, a, b);
    const LogConnection d = LogConnection::rank_one(c, c->zero(), LineLabel::omega_log());
    CHECK(p_curvature(d).is_zero());
    CHECK_FALSE(is_pre_tango(d).pre_tango);
    CHECK(code_of([&] { miura_from_tango(d); }) == ErrorCode::NotPreTango);
    const MiuraGL2Oper m = miura_from_cartan(cartan_from_connections({d}));
    CHECK_FALSE(p_curvature(m.conn).is_zero());
    CHECK_FALSE(oracle::pfold_pcurvature(m.conn.matrix()).is_zero());
    CHECK(code_of([&] { pretango_of(m); }) == ErrorCode::NotDormant);
  }
}

TEST_CASE("exponents of the Cartan pair (d, d + dlog x)") {
  const fp_t p = 5;
  const CurvePtr c = Curve::p1(p, {Mark::at(0), Mark::at(1), Mark::infinity()});
  CartanConnection cc;
  cc.components.push_back(LogConnection::rank_one(c, c->zero(), LineLabel::trivial()));
  cc.components.push_back(LogConnection::rank_one(c, c->x().inverse(), LineLabel::tangent_log()));
  const MiuraGL2Oper m = miura_from_cartan(cc);
  const ExponentVector raw = raw_exponent_of(m);
  CHECK(raw.per_mark == std::vector<std::vector<fp_t>>{{0, 1}, {0, 0}, {0, p - 1}});
  // Bundle-corrected exponents coincide with the component monodromy.
  const ExponentVector ev = exponent_of(m);
  const auto mono = cartan_monodromy(cc);
  for (std::size_t k = 0; k < ev.per_mark.size(); ++k)
    for (std::size_t l = 0; l < 2; ++l) CHECK(ev.per_mark[k][l] == mono[k][l]);
  const CurvePtr e = Curve::weierstrass(5, 3, 0);
  const MiuraGL2Oper trivial =
      miura_from_cartan(cartan_from_connections({LogConnection::rank_one(e, e->zero(), LineLabel::omega_log())}));
  CHECK(exponent_of(trivial).per_mark.empty());
}

TEST_CASE("graded pieces and Cartan round trip") {
  const CurvePtr c = Curve::p1(7, {Mark::at(0), Mark::at(3), Mark::infinity()});
  for (const EnumerationReport& rep : sweep(c, false, 1)) {
    for (const LogConnection& n : rep.flat_list) {
      const CartanConnection cc = cartan_from_connections({n});
      const MiuraGL2Oper m = miura_from_cartan(cc);
      const CartanConnection back = graded(m);
      REQUIRE(back.rank() == 2);
      CHECK(back.components[0] == cc.components[0]);
      CHECK(back.components[1] == cc.components[1]);
    }
  }
}

TEST_CASE("specialization undoes diagonal basis changes") {
  std::mt19937_64 rng(62);
  const CurvePtr c = Curve::weierstrass(5, 3, 0);
  const EnumerationReport rep = count_pretango(c, {});
  for (const LogConnection& pt : rep.pretango_list) {
    const MiuraGL2Oper m = miura_from_tango(pt);
    for (int t = 0; t < 3; ++t) {
      const fp_t lambda = 1 + oracle::random_fp(rng, 4);
      const FFElem g = oracle::random_nonzero_elem(rng, c, 1);
      const LogConnection moved = gauge_diagonal(m.conn, lambda, g);
      CHECK(p_curvature(moved).is_zero());
      const auto [back, change] = specialize(moved);
      CHECK(back.conn == m.conn);
    }
  }
}

TEST_CASE("specialization and special-shape failures") {
  const CurvePtr c = Curve::p1(5, {Mark::at(0), Mark::infinity()});
  FFMatrix a(c, 2);
  a(0, 0) = c->zero();
  a(0, 1) = c->zero();
  a(1, 0) = c->zero();
  a(1, 1) = c->zero();
  const LogConnection degenerate(c, a, miura_label(c));
  CHECK(code_of([&] { specialize(degenerate); }) == ErrorCode::DegenerateKS);
  a(1, 0) = c->one();
  a(0, 1) = c->x();
  const LogConnection not_special(c, a, miura_label(c));
  CHECK_THROWS_AS(check_special(not_special), Error);
}
