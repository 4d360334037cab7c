#include "dormant/cartier.hpp"

#include "dormant/error.hpp"

namespace dormant {

namespace {

FFElem nth_derivative(FFElem h, fp_t n) {
  for (fp_t k = 0; k < n; ++k) {
    if (h.is_zero()) break;
    h = h.derivative();
  }
  return h;
}

// Monomial rule on a polynomial form: keep exponents n = -1 mod p.
UPoly cartier_poly(const UPoly& f) {
  const fp_t p = f.modulus();
  std::vector<fp_t> out;
  for (int n = static_cast<int>(p) - 1; n < f.size(); n += static_cast<int>(p)) {
    const int m = (n + 1) / static_cast<int>(p) - 1;
    if (static_cast<int>(out.size()) <= m) out.resize(m + 1, 0);
    out[m] = f.coeff(n);
  }
  return UPoly(p, out);
}

}  // namespace

FFElem cartier(const FFElem& h) {
  if (h.is_zero()) return h;
  FFElem d = -nth_derivative(h, h.p() - 1);
  auto r = d.pth_root();
  if (!r) raise(ErrorCode::InvalidArgument, "(p-1)-st derivative is not a p-th power");
  return *r;
}

FFElem cartier_p1(const FFElem& h) {
  const CurvePtr& c = h.curve();
  if (c->kind() != CurveKind::P1Marked) raise(ErrorCode::UnsupportedCurve, "monomial Cartier rule needs P^1");
  if (h.is_zero()) return h;
  const fp_t p = c->p();
  const UPoly& den = h.den();
  UPoly num = h.nums()[0] * den.pow(p - 1);
  return c->from_ratfunc(RatFunc::normalize(cartier_poly(num), den));
}

std::optional<FFElem> exact_primitive(const FFElem& a) {
  const CurvePtr& c = a.curve();
  const fp_t p = c->p();
  if (a.is_zero()) return c->zero();
  // f = -sum_{k=1}^{p-1} (-x)^k / k! a^{(k-1)}; then f' = a + x^{p-1} a^{(p-1)}.
  const FFElem mx = -c->x();
  FFElem f = c->zero();
  FFElem coef = c->one();
  FFElem der = a;
  for (fp_t k = 1; k < p; ++k) {
    coef = (coef * mx).scaled(fp_inv(k, p));
    f -= coef * der;
    der = der.derivative();
  }
  if (!der.is_zero()) return std::nullopt;
  if (f.derivative() != a) raise(ErrorCode::InvalidArgument, "primitive check failed");
  return f;
}

bool is_exact(const FFElem& a) { return nth_derivative(a, a.p() - 1).is_zero(); }

bool is_cartier_fixed(const FFElem& h) { return cartier(h) == h; }

PreTangoReport is_pre_tango(const LogConnection& c) {
  if (c.rank() != 1 || !c.label().summands[0].is_omega_log())
    raise(ErrorCode::NotOmegaBundle, "pre-Tango test needs Omega_log trivialized by eta");
  PreTangoReport rep;
  const FFElem& a = c.entry(0, 0);
  rep.flat = p_curvature_rank1(a).is_zero();
  if (!rep.flat) return rep;
  rep.generator = horizontal_generator(a);
  rep.cartier = cartier(*rep.generator * c.curve()->eta());
  rep.pre_tango = rep.cartier->is_zero();
  return rep;
}

LogConnection pretango_from_function(const FFElem& f) {
  const CurvePtr& c = f.curve();
  const FFElem df = f.derivative();
  if (df.is_zero()) raise(ErrorCode::CandidateIsPthPower, "f is a p-th power");
  const FFElem u = df * c->eta().inverse();
  return LogConnection::rank_one(c, -(u.derivative() * u.inverse()), LineLabel::omega_log());
}

}  // namespace dormant
