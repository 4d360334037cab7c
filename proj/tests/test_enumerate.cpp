#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <tuple>

#include "dormant/cartier.hpp"
#include "dormant/enumerate.hpp"
#include "dormant/error.hpp"
#include "oracles.hpp"

using namespace dormant;

namespace {

CurvePtr line_with_marks(fp_t p, std::size_t r) {
  std::vector<Mark> marks;
  for (std::size_t i = 0; i + 1 < r; ++i) marks.push_back(Mark::at(static_cast<fp_t>(i)));
  marks.push_back(Mark::infinity());
  return Curve::p1(p, marks);
}

}  // namespace

TEST_CASE("elliptic pre-Tango counts") {
  for (auto [p, a, b] : {std::tuple{5u, 3, 0}, {5u, 3, 2}, {5u, 3, 3}, {7u, 0, 5}, {7u, 3, 5}, {7u, 5, 5}}) {
    const CurvePtr c = Curve::weierstrass(p, a, b);
    REQUIRE(oracle::ordinary_by_count(p, a, b));
    const EnumerationReport rep = count_pretango(c, {});
    CHECK(rep.flat_count == static_cast<long long>(p));
    CHECK(rep.pretango_count == static_cast<long long>(p) - 1);
    CHECK(rep.admissible);
    CHECK(rep.formula_value == Rational(0));
    for (const LogConnection& conn : rep.flat_list) CHECK(oracle::pfold_pcurvature(conn.matrix()).is_zero());
  }
  // Supersingular: only the trivial connection is flat, and it is pre-Tango.
  const EnumerationReport ss = count_pretango(Curve::weierstrass(3, 1, 1), {});
  CHECK(ss.flat_count == 1);
  CHECK(ss.pretango_count == 1);
}

TEST_CASE("genus-0 flat counts follow the divisibility law") {
  for (fp_t p : {3u, 5u, 7u}) {
    for (std::size_t r : {3u, 4u, 5u}) {
      if (r > p + 1) continue;
      const CurvePtr c = line_with_marks(p, r);
      const auto reports = sweep(c, true, 2);
      CHECK(reports.size() == static_cast<std::size_t>(std::pow(p, r)));
      for (const EnumerationReport& e : reports) {
        CAPTURE(c->descriptor());
        CAPTURE(machine_line(e));
        CHECK(e.flat_count == oracle::genus0_flat_count(e.monodromy, p));
        CHECK(e.formula_value == oracle::dimension_formula(0, e.monodromy, p));
        if (e.formula_value < 0) CHECK(e.pretango_count == 0);
        CHECK(e.pretango_count <= e.flat_count);
        for (const LogConnection& conn : e.flat_list) {
          const auto mono = monodromy(conn);
          REQUIRE(mono.size() == r);
          for (std::size_t k = 0; k < r; ++k) CHECK(mono[k][0] == e.monodromy[k]);
        }
        for (const LogConnection& conn : e.pretango_list) CHECK(is_pre_tango(conn).pre_tango);
      }
    }
  }
}

TEST_CASE("emptiness oracle values") {
  const EmptinessVerdict v = emptiness_oracle(0, 3, {0, 0, 0}, 5);
  CHECK(v.value == Rational(-2) + Rational(1, 5));
  CHECK(v.must_be_empty);
  const EmptinessVerdict w = emptiness_oracle(1, 0, {}, 7);
  CHECK(w.value == Rational(0));
  CHECK_FALSE(w.must_be_empty);
  CHECK(emptiness_oracle(6, 0, {}, 5).value == Rational(12));
}

TEST_CASE("monodromy vectors and report formatting") {
  const auto v = all_monodromy_vectors(3, 2);
  REQUIRE(v.size() == 9);
  CHECK(v.front() == std::vector<fp_t>{0, 0});
  CHECK(v[1] == std::vector<fp_t>{0, 1});
  CHECK(v.back() == std::vector<fp_t>{2, 2});
  CHECK(std::is_sorted(v.begin(), v.end()));
  CHECK(all_monodromy_vectors(5, 0).size() == 1);
  EnumerationReport r;
  r.flat_count = 1;
  r.formula_value = Rational(-4, 3);
  CHECK(machine_line(r) == "flat=1 pretango=- admissible=false formula=-4/3");
}

TEST_CASE("sweeps are independent of the thread count") {
  const CurvePtr c = line_with_marks(5, 4);
  const auto one = sweep(c, true, 1);
  const auto eight = sweep(c, true, 8);
  REQUIRE(one.size() == eight.size());
  for (std::size_t i = 0; i < one.size(); ++i) {
    CHECK(one[i].monodromy == eight[i].monodromy);
    CHECK(machine_line(one[i]) == machine_line(eight[i]));
    CHECK(one[i].flat_list == eight[i].flat_list);
  }
}

TEST_CASE("enumeration input errors") {
  const CurvePtr c = line_with_marks(5, 3);
  CHECK_THROWS_AS(enumerate_flat(c, {0, 1}), Error);
  CHECK_THROWS_AS(enumerate_flat(Curve::raynaud(5, 1), {}), Error);
}
