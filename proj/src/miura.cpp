#include "dormant/miura.hpp"

#include "dormant/cartier.hpp"
#include "dormant/error.hpp"

namespace dormant {

namespace {

std::vector<fp_t> normalize_class(const std::vector<fp_t>& v, fp_t p) {
  std::vector<fp_t> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = fp_sub(v[i], v[0], p);
  return out;
}

// w'/w for eta = w dx: the gauge term between the eta^{-1} and d/dx trivializations of T_log.
FFElem dlog_w(const CurvePtr& c) {
  const FFElem& w = c->eta();
  return w.derivative() * w.inverse();
}

}  // namespace

ExponentVector exponent_vector(const std::vector<std::vector<fp_t>>& full, fp_t p) {
  ExponentVector e;
  e.n = full.empty() ? 0 : static_cast<int>(full[0].size());
  for (const auto& v : full) {
    if (static_cast<int>(v.size()) != e.n) raise(ErrorCode::InvalidArgument, "exponent vectors of unequal length");
    e.per_mark.push_back(v);
    e.cls.push_back(e.n == 0 ? v : normalize_class(v, p));
  }
  return e;
}

ExponentVector class_of(const std::vector<std::vector<fp_t>>& eps, fp_t p) {
  std::vector<std::vector<fp_t>> full;
  for (const auto& v : eps) {
    std::vector<fp_t> w{0};
    w.insert(w.end(), v.begin(), v.end());
    full.push_back(std::move(w));
  }
  ExponentVector e = exponent_vector(full, p);
  if (eps.empty()) e.n = 0;
  return e;
}

ExponentVector exponent_class_for_pretango(const std::vector<fp_t>& pretango_monodromy, fp_t p) {
  std::vector<std::vector<fp_t>> eps;
  for (fp_t mu : pretango_monodromy)
    eps.push_back({kPreTangoExponentSign < 0 ? fp_neg(mu, p) : mu});
  return class_of(eps, p);
}

CartanConnection cartan_from_connections(const std::vector<LogConnection>& conns) {
  if (conns.empty()) raise(ErrorCode::InvalidArgument, "need at least one connection");
  const CurvePtr& c = conns[0].curve();
  CartanConnection out;
  out.components.push_back(LogConnection::rank_one(c, c->zero(), LineLabel::trivial()));
  for (const LogConnection& n : conns) {
    if (n.curve() != c) raise(ErrorCode::CurveMismatch, "Cartan inputs on different curves");
    if (n.rank() != 1 || !n.label().summands[0].is_omega_log())
      raise(ErrorCode::NotOmegaBundle, "Cartan inputs must be connections on Omega_log");
    out.components.push_back(tensor(out.components.back(), dual(n)));
  }
  return out;
}

std::vector<std::vector<fp_t>> cartan_monodromy(const CartanConnection& c) {
  const CurvePtr& curve = c.components.at(0).curve();
  std::vector<std::vector<fp_t>> out(curve->marks().size());
  for (const LogConnection& comp : c.components) {
    auto m = monodromy(comp);
    for (std::size_t i = 0; i < m.size(); ++i) out[i].push_back(m[i][0]);
  }
  return out;
}

BundleLabel miura_label(const CurvePtr& curve) {
  LineLabel t = LineLabel::tangent_log();
  t.section = curve->eta();
  return BundleLabel{{LineLabel::trivial(), t}};
}

void check_special(const LogConnection& c) {
  if (c.rank() != 2) raise(ErrorCode::InvalidArgument, "Miura opers have rank 2");
  if (!(c.label() == miura_label(c.curve()))) raise(ErrorCode::InvalidArgument, "Miura opers live on O + T_log");
  if (!c.entry(0, 1).is_zero()) raise(ErrorCode::InvalidArgument, "(1,2) entry must vanish");
  if (c.entry(1, 0) != c.curve()->one()) raise(ErrorCode::InvalidArgument, "(2,1) entry must be 1");
}

MiuraGL2Oper miura_from_cartan(const CartanConnection& c) {
  if (c.rank() != 2) raise(ErrorCode::InvalidArgument, "rank-2 Cartan connection expected");
  const LogConnection& c0 = c.components[0];
  const LogConnection& c1 = c.components[1];
  const CurvePtr& curve = c0.curve();
  if (c1.curve() != curve) raise(ErrorCode::CurveMismatch, "Cartan components on different curves");
  if (!(c0.label().summands[0] == LineLabel::trivial()) || !(c1.label().summands[0] == LineLabel::tangent_log()))
    raise(ErrorCode::InvalidArgument, "Cartan components must live on O and T_log");
  FFMatrix a(curve, 2);
  a(0, 0) = c0.entry(0, 0);
  a(1, 0) = curve->one();
  // eta^{-1} = (d/dx) / w, so d/dx = w eta^{-1}.
  a(1, 1) = c1.entry(0, 0) + dlog_w(curve);
  MiuraGL2Oper m{LogConnection(curve, a, miura_label(curve))};
  return m;
}

CartanConnection graded(const MiuraGL2Oper& m) {
  const CurvePtr& c = m.curve();
  CartanConnection out;
  out.components.push_back(LogConnection::rank_one(c, m.a0(), LineLabel::trivial()));
  out.components.push_back(LogConnection::rank_one(c, m.a1() - dlog_w(c), LineLabel::tangent_log()));
  return out;
}

LogConnection gauge_diagonal(const LogConnection& c, fp_t lambda, const FFElem& g) {
  if (c.rank() != 2) raise(ErrorCode::InvalidArgument, "rank-2 connection expected");
  const CurvePtr& curve = c.curve();
  const fp_t p = curve->p();
  if (lambda % p == 0 || g.is_zero()) raise(ErrorCode::InvalidArgument, "basis change must be invertible");
  const FFElem gi = g.inverse();
  // New basis (lambda e0, g e1): A' = G^{-1} A G + G^{-1} G'.
  FFMatrix a(curve, 2);
  a(0, 0) = c.entry(0, 0);
  a(0, 1) = c.entry(0, 1) * g.scaled(fp_inv(lambda, p));
  a(1, 0) = c.entry(1, 0) * gi.scaled(lambda);
  a(1, 1) = c.entry(1, 1) + g.derivative() * gi;
  BundleLabel label = c.label();
  auto scale = [&](LineLabel& l, const FFElem& s) { l.section = l.section ? *l.section * s : s; };
  if (lambda != 1) scale(label.summands[0], curve->constant(static_cast<long long>(lambda)));
  if (g != curve->one()) scale(label.summands[1], g);
  return LogConnection(curve, a, label);
}

std::pair<MiuraGL2Oper, BasisChange> specialize(const LogConnection& general) {
  if (general.rank() != 2) raise(ErrorCode::InvalidArgument, "rank-2 connection expected");
  const CurvePtr& curve = general.curve();
  const fp_t p = curve->p();
  const LineLabel& l0 = general.label().summands[0];
  const LineLabel& l1 = general.label().summands[1];
  if (l0.omega != 0 || !l0.twist.empty() || l1.omega != -1 || !l1.twist.empty())
    raise(ErrorCode::InvalidArgument, "specialization expects a connection on O + T_log");
  if (!general.entry(0, 1).is_zero()) raise(ErrorCode::InvalidArgument, "T_log must be horizontal: (1,2) entry is nonzero");
  const FFElem& ks = general.entry(1, 0);
  if (ks.is_zero()) raise(ErrorCode::DegenerateKS, "(2,1) entry vanishes identically");
  // In the frames e0 = s0, e1 = s1 eta^{-1}, KS is a unit iff ks s1 / (s0 w) is a nonzero constant.
  const FFElem s0 = l0.section ? *l0.section : curve->one();
  const FFElem s1 = l1.section ? *l1.section : curve->one();
  if (!s0.is_constant()) raise(ErrorCode::InvalidArgument, "O summand must be trivialized by a constant");
  const FFElem h = ks * s1 * (s0 * curve->eta()).inverse();
  if (!h.is_constant()) raise(ErrorCode::DegenerateKS, "Kodaira-Spencer entry is not a unit");
  // Frames (lambda e0, g e1) with g s1 = w and lambda = 1 / (h s0) make the (2,1) entry 1.
  BasisChange bc;
  bc.lambda = fp_inv(fp_mul(h.nums()[0].coeff(0), s0.nums()[0].coeff(0), p), p);
  bc.g = curve->eta() * s1.inverse();
  LogConnection out = gauge_diagonal(general, bc.lambda, bc.g);
  if (out.entry(1, 0) != curve->one()) raise(ErrorCode::DegenerateKS, "Kodaira-Spencer entry is not 1 after normalization");
  // Constant frames of O carry no order data; the label is the standard one.
  MiuraGL2Oper m{LogConnection(curve, out.matrix(), miura_label(curve))};
  return {m, bc};
}

ExponentVector exponent_of(const MiuraGL2Oper& m) {
  std::vector<std::vector<fp_t>> full;
  for (const ResidueMatrix& r : monodromy(m.conn)) full.push_back({r[0], r[3]});
  ExponentVector e = exponent_vector(full, m.curve()->p());
  e.n = 2;
  return e;
}

ExponentVector raw_exponent_of(const MiuraGL2Oper& m) {
  std::vector<std::vector<fp_t>> full;
  for (const ResidueMatrix& r : raw_residues(m.conn)) full.push_back({r[0], r[3]});
  ExponentVector e = exponent_vector(full, m.curve()->p());
  e.n = 2;
  return e;
}

bool is_dormant(const MiuraGL2Oper& m) { return p_curvature(m.conn).is_zero(); }

MiuraGL2Oper miura_from_tango(const LogConnection& pretango) {
  PreTangoReport rep = is_pre_tango(pretango);
  if (!rep.pre_tango) raise(ErrorCode::NotPreTango, rep.flat ? "horizontal section is not exact" : "not flat");
  return miura_from_cartan(cartan_from_connections({pretango}));
}

MiuraGL2Oper miura_from_tango(const TangoCertificate& cert) { return miura_from_tango(pretango_from_tango(cert)); }

LogConnection pretango_of(const MiuraGL2Oper& m) {
  check_special(m.conn);
  if (!m.a0().is_zero()) raise(ErrorCode::InvalidArgument, "O component must be d");
  if (!is_dormant(m)) raise(ErrorCode::NotDormant, "p-curvature is nonzero");
  const CurvePtr& c = m.curve();
  return LogConnection::rank_one(c, -(m.a1() - dlog_w(c)), LineLabel::omega_log());
}

}  // namespace dormant
