#include "dormant/enumerate.hpp"

#include <algorithm>
#include <thread>

#include "dormant/cartier.hpp"
#include "dormant/error.hpp"
#include "dormant/linalg.hpp"

namespace dormant {

EmptinessVerdict emptiness_oracle(int g, int r, const std::vector<fp_t>& eps, fp_t p) {
  long long s = 2LL * g - 2 + r;
  for (fp_t e : eps) s += tau_inv(fp_neg(e % p, p));
  EmptinessVerdict v;
  v.value = Rational(2LL * g - 2) + Rational(s, static_cast<long long>(p));
  v.must_be_empty = v.value < 0;
  return v;
}

FlatEnumerator::FlatEnumerator(CurvePtr curve) : curve_(std::move(curve)) {
  const Curve& c = *curve_;
  std::vector<Place> places;
  switch (c.kind()) {
    case CurveKind::P1Marked: {
      for (const Mark& m : c.marks())
        if (!m.infinite) basis_.push_back((c.x() - c.constant(static_cast<long long>(m.x))).inverse());
      basis_.push_back(c.one());
      basis_.push_back(c.x());
      places = mark_places(c);
      if (std::none_of(c.marks().begin(), c.marks().end(), [](const Mark& m) { return m.infinite; }))
        places.push_back(Place::infinity());
      break;
    }
    case CurveKind::Weierstrass: {
      const FFElem yi = c.y().inverse();
      for (int i = 0; i <= 2; ++i) {
        basis_.push_back(c.x().pow(i) * yi);
        basis_.push_back(c.x().pow(i));
      }
      // Every basis form is regular at the affine places.
      places.push_back(Place::infinity());
      break;
    }
    case CurveKind::RaynaudPlane:
      raise(ErrorCode::UnsupportedCurve, "enumeration on Raynaud curves is out of reach");
  }
  const auto marks = mark_places(c);
  for (const Place& pl : places) {
    PlaceRows rows;
    rows.place = pl;
    for (std::size_t i = 0; i < marks.size(); ++i)
      if (marks[i] == pl) {
        rows.marked = true;
        rows.mark_index = i;
      }
    rows.frame_order = section_order(curve_, LineLabel::omega_log(), pl);
    int depth = 1;
    for (const FFElem& b : basis_) depth = std::max(depth, -form_valuation(b, pl));
    rows.polar.assign(depth, std::vector<fp_t>(basis_.size(), 0));
    for (std::size_t bi = 0; bi < basis_.size(); ++bi) {
      TruncSeries s = expand_upto(basis_[bi], pl, 0, true);
      for (int j = 1; j <= depth; ++j) rows.polar[j - 1][bi] = s.coeff(-j);
    }
    places_.push_back(std::move(rows));
  }
}

EnumerationReport FlatEnumerator::enumerate(const std::vector<fp_t>& mu, bool with_pretango) const {
  const Curve& c = *curve_;
  const fp_t p = c.p();
  if (mu.size() != c.marks().size()) raise(ErrorCode::InvalidArgument, "monodromy vector length must equal the number of marks");
  EnumerationReport rep;
  rep.curve_tag = c.descriptor();
  rep.monodromy = mu;
  const int g = c.genus();
  const int r = static_cast<int>(mu.size());
  long long deg = 2LL * g - 2 + r;
  std::vector<fp_t> eps;
  for (fp_t m : mu) {
    deg += tau_inv(m);
    eps.push_back(fp_neg(m, p));
  }
  rep.admissible = deg % static_cast<long long>(p) == 0;
  rep.formula_value = emptiness_oracle(g, r, eps, p).value;
  rep.pretango_checked = with_pretango;

  // Local conditions: no t^{-j} for j >= 2; residue mu + k at marks, k elsewhere.
  FpMatrix a;
  std::vector<fp_t> b;
  for (const PlaceRows& pr : places_) {
    for (std::size_t j = 2; j <= pr.polar.size(); ++j) {
      a.push_back(pr.polar[j - 1]);
      b.push_back(0);
    }
    a.push_back(pr.polar[0]);
    fp_t target = fp_from_int(pr.frame_order, p);
    if (pr.marked) target = fp_add(target, mu[pr.mark_index], p);
    b.push_back(target);
  }
  auto sol = solve_affine(a, b, basis_.size(), p);
  if (!sol) return rep;

  // Walk particular + span(kernel) in lexicographic order of the kernel coordinates.
  const std::size_t kdim = sol->kernel.size();
  std::vector<fp_t> coords(kdim, 0);
  for (;;) {
    std::vector<fp_t> z = sol->particular;
    for (std::size_t k = 0; k < kdim; ++k)
      for (std::size_t i = 0; i < z.size(); ++i) z[i] = fp_add(z[i], fp_mul(coords[k], sol->kernel[k][i], p), p);
    FFElem entry = c.zero();
    for (std::size_t i = 0; i < z.size(); ++i)
      if (z[i] != 0) entry += basis_[i].scaled(z[i]);
    FFMatrix m(curve_, 1);
    m(0, 0) = entry;
    if (p_curvature_operator_power(m).is_zero()) {
      LogConnection conn = LogConnection::rank_one(curve_, entry, LineLabel::omega_log());
      if (with_pretango && is_pre_tango(conn).pre_tango) rep.pretango_list.push_back(conn);
      rep.flat_list.push_back(std::move(conn));
    }
    std::size_t k = 0;
    while (k < kdim && ++coords[k] == p) coords[k++] = 0;
    if (k == kdim) break;
  }
  rep.flat_count = static_cast<long long>(rep.flat_list.size());
  rep.pretango_count = static_cast<long long>(rep.pretango_list.size());
  return rep;
}

EnumerationReport enumerate_flat(const CurvePtr& curve, const std::vector<fp_t>& mu) {
  return FlatEnumerator(curve).enumerate(mu, false);
}

EnumerationReport count_pretango(const CurvePtr& curve, const std::vector<fp_t>& eps) {
  std::vector<fp_t> mu;
  for (fp_t e : eps) mu.push_back(fp_neg(e % curve->p(), curve->p()));
  return FlatEnumerator(curve).enumerate(mu, true);
}

std::vector<std::vector<fp_t>> all_monodromy_vectors(fp_t p, std::size_t r) {
  std::vector<std::vector<fp_t>> out;
  std::vector<fp_t> v(r, 0);
  for (;;) {
    out.push_back(v);
    std::size_t i = r;
    while (i > 0) {
      if (++v[i - 1] < p) break;
      v[--i] = 0;
    }
    if (i == 0) break;
  }
  return out;
}

std::vector<EnumerationReport> sweep(const CurvePtr& curve, bool with_pretango, unsigned threads) {
  const auto vecs = all_monodromy_vectors(curve->p(), curve->marks().size());
  const FlatEnumerator en(curve);
  std::vector<std::optional<EnumerationReport>> slots(vecs.size());
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(vecs.size())));
  auto work = [&](unsigned w) {
    for (std::size_t i = w; i < vecs.size(); i += threads) slots[i] = en.enumerate(vecs[i], with_pretango);
  };
  std::vector<std::thread> pool;
  for (unsigned w = 1; w < threads; ++w) pool.emplace_back(work, w);
  work(0);
  for (auto& t : pool) t.join();
  std::vector<EnumerationReport> out;
  out.reserve(slots.size());
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

std::string to_string(const Rational& q) {
  if (q.denominator() == 1) return std::to_string(q.numerator());
  return std::to_string(q.numerator()) + "/" + std::to_string(q.denominator());
}

std::string machine_line(const EnumerationReport& r) {
  return "flat=" + std::to_string(r.flat_count) +
         " pretango=" + (r.pretango_checked ? std::to_string(r.pretango_count) : std::string("-")) +
         " admissible=" + (r.admissible ? "true" : "false") + " formula=" + to_string(r.formula_value);
}

}  // namespace dormant
