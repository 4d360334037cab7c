#include <doctest.h>

#include <tuple>

#include "dormant/connection.hpp"
#include "dormant/error.hpp"
#include "oracles.hpp"

using namespace dormant;

namespace {

BundleLabel trivial_bundle(int n) {
  BundleLabel b;
  for (int i = 0; i < n; ++i) b.summands.push_back(LineLabel::trivial());
  return b;
}

struct RandomLog {
  LogConnection conn;
  std::vector<ResidueMatrix> finite;  // residue matrix per finite mark, mark order
};

// A = sum_m R_m / (x - m) over the finite marks; infinity is always a mark.
RandomLog random_log_connection(std::mt19937_64& rng, const CurvePtr& c, int n) {
  const fp_t p = c->p();
  FFMatrix a(c, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = c->zero();
  std::vector<ResidueMatrix> res;
  for (const Mark& m : c->marks()) {
    if (m.infinite) continue;
    ResidueMatrix r(static_cast<std::size_t>(n * n));
    for (auto& v : r) v = oracle::random_fp(rng, p);
    const FFElem pole = (c->x() - c->constant(m.x)).inverse();
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) a(i, j) += pole.scaled(r[i * n + j]);
    res.push_back(r);
  }
  return {LogConnection(c, a, trivial_bundle(n)), res};
}

// Value at x = m of a rational function, which must be regular there.
std::optional<fp_t> value_at(const RatFunc& f, fp_t m) {
  const fp_t p = f.modulus();
  const fp_t d = f.den().eval(m);
  if (d == 0) return std::nullopt;
  return fp_mul(f.num().eval(m), fp_inv(d, p), p);
}

// Value at infinity of a rational function, which must be regular there.
std::optional<fp_t> value_at_infinity(const RatFunc& f) {
  if (f.is_zero()) return 0;
  const int dn = f.num().degree().value(), dd = f.den().degree().value();
  if (dn > dd) return std::nullopt;
  if (dn < dd) return 0;
  return fp_mul(f.num().leading(), fp_inv(f.den().leading(), f.modulus()), f.modulus());
}

}  // namespace

TEST_CASE("p-curvature agrees with the p-fold application oracle on random log connections") {
  for (fp_t p : {3u, 5u, 7u}) {
    std::mt19937_64 rng(100 + p);
    const CurvePtr c = Curve::p1(p, {Mark::at(0), Mark::at(1), Mark::infinity()});
    for (int rank : {1, 2}) {
      const int count = rank == 1 ? 100 : 30;
      for (int t = 0; t < count; ++t) {
        const RandomLog rl = random_log_connection(rng, c, rank);
        REQUIRE_NOTHROW(rl.conn.validate());
        const FFMatrix psi = p_curvature(rl.conn);
        CHECK(psi == oracle::pfold_pcurvature(rl.conn.matrix()));
        CHECK(p_curvature_operator_power(rl.conn.matrix()) == psi);
        if (rank == 1) {
          CHECK(p_curvature_rank1(rl.conn.entry(0, 0)) == psi(0, 0));
          CHECK(residue_pcurvature_identity(rl.conn));
        }
        // Psi on the log derivation at each mark equals R^p - R.
        std::size_t k = 0;
        ResidueMatrix at_inf(static_cast<std::size_t>(rank * rank), 0);
        for (const Mark& m : c->marks()) {
          if (m.infinite) continue;
          const auto defect = oracle::frobenius_defect(rl.finite[k], rank, p);
          const RatFunc lin = RatFunc::linear_power(p, m.x, static_cast<int>(p));
          for (int i = 0; i < rank * rank; ++i) {
            CHECK(value_at(psi(i / rank, i % rank).component(0) * lin, m.x) == std::optional<fp_t>(defect[i]));
            at_inf[i] = fp_sub(at_inf[i], rl.finite[k][i], p);
          }
          ++k;
        }
        const auto defect_inf = oracle::frobenius_defect(at_inf, rank, p);
        const RatFunc xp = RatFunc(UPoly::monomial(p, p - 1, static_cast<int>(p)));
        for (int i = 0; i < rank * rank; ++i)
          CHECK(value_at_infinity(psi(i / rank, i % rank).component(0) * xp) == std::optional<fp_t>(defect_inf[i]));
        // Residue data reported by the library.
        const auto mono = monodromy(rl.conn);
        REQUIRE(mono.size() == 3);
        CHECK(mono[0] == rl.finite[0]);
        CHECK(mono[1] == rl.finite[1]);
        CHECK(mono[2] == at_inf);
      }
    }
  }
}

TEST_CASE("p-curvature on elliptic curves against the oracle") {
  std::mt19937_64 rng(31);
  for (auto [p, a, b] : {std::tuple{3u, 1, 1}, {5u, 3, 0}, {7u, 0, 5}}) {
    const CurvePtr c = Curve::weierstrass(p, a, b);
    const FFElem yi = c->y().inverse();
    for (int rank : {1, 2}) {
      for (int t = 0; t < 10; ++t) {
        FFMatrix m(c, rank);
        for (int i = 0; i < rank; ++i)
          for (int j = 0; j < rank; ++j) m(i, j) = yi.scaled(oracle::random_fp(rng, p));
        const LogConnection conn(c, m, trivial_bundle(rank));
        REQUIRE_NOTHROW(conn.validate());
        CHECK(p_curvature(conn) == oracle::pfold_pcurvature(m));
      }
    }
  }
}

TEST_CASE("closed form equals operator powering on arbitrary elements") {
  std::mt19937_64 rng(32);
  for (const CurvePtr& c : {Curve::weierstrass(5, 3, 2), Curve::raynaud(3, 2)}) {
    for (int t = 0; t < 5; ++t) {
      FFMatrix m(c, 1);
      m(0, 0) = oracle::random_elem(rng, c, 1);
      CHECK(p_curvature_rank1(m(0, 0)) == p_curvature_operator_power(m)(0, 0));
      CHECK(p_curvature_rank1(m(0, 0)) == oracle::pfold_pcurvature(m)(0, 0));
    }
  }
}

TEST_CASE("p-curvature is additive in rank one and compatible with duals and gauge") {
  std::mt19937_64 rng(33);
  const fp_t p = 5;
  const CurvePtr c = Curve::p1(p, {Mark::at(0), Mark::at(2), Mark::infinity()});
  for (int t = 0; t < 10; ++t) {
    const auto a = random_log_connection(rng, c, 1).conn;
    const auto b = random_log_connection(rng, c, 1).conn;
    CHECK(p_curvature(tensor(a, b))(0, 0) == p_curvature(a)(0, 0) + p_curvature(b)(0, 0));
    const auto m = random_log_connection(rng, c, 2).conn;
    CHECK(p_curvature(dual(m)) == -p_curvature(m).transpose());
    // G = [[1, x], [0, 1]]: A' = G^{-1} A G + G^{-1} G', Psi' = G^{-1} Psi G.
    FFMatrix g = FFMatrix::identity(c, 2), gi = FFMatrix::identity(c, 2);
    g(0, 1) = c->x();
    gi(0, 1) = -c->x();
    const FFMatrix a2 = gi * m.matrix() * g + gi * g.derivative();
    CHECK(p_curvature_operator_power(a2) == gi * p_curvature(m) * g);
  }
}

TEST_CASE("horizontal sections and descent") {
  const CurvePtr c = Curve::p1(5, {Mark::at(0), Mark::infinity()});
  // a = 2/x is flat with horizontal section x^{-2}.
  const FFElem a = c->x().inverse().scaled(2);
  const FFElem u = horizontal_generator(a);
  CHECK((u.derivative() + a * u).is_zero());
  CHECK_THROWS_AS(horizontal_generator(c->x()), Error);
  const FFElem s = c->x().pow(3) + c->one();
  const LogConnection can = canonical_connection(c, {}, s);
  CHECK(p_curvature(can).is_zero());
  CHECK(can.entry(0, 0) == s.derivative() / s);
}

TEST_CASE("bundle labels") {
  const CurvePtr c = Curve::p1(5, {Mark::at(0), Mark::infinity()});
  for (const char* s : {"O", "Omega_log", "T_log", "O+T_log", "Omega_log^2"}) {
    const BundleLabel b = parse_bundle_label(*c, s);
    CHECK(parse_bundle_label(*c, to_string(b)) == b);
  }
  CHECK(parse_bundle_label(*c, "O+T_log").rank() == 2);
  CHECK(label_degree(*c, LineLabel::omega_log()) == 0);  // 2g - 2 + r on two marks
  CHECK_THROWS_AS(parse_bundle_label(*c, "Q"), Error);
  const CurvePtr e = Curve::weierstrass(5, 3, 0);
  CHECK(label_degree(*e, LineLabel::omega_log()) == 0);
}

TEST_CASE("undeclared poles are rejected") {
  const CurvePtr c = Curve::p1(5, {Mark::at(0), Mark::infinity()});
  const LogConnection bad = LogConnection::rank_one(c, (c->x() - c->one()).inverse(), LineLabel::trivial());
  CHECK_THROWS_AS(bad.validate(), Error);
  const LogConnection second = LogConnection::rank_one(c, c->x().pow(-2), LineLabel::trivial());
  CHECK_THROWS_AS(second.validate(), Error);
}
