#pragma once

#include <optional>

#include "dormant/connection.hpp"
#include "dormant/curve.hpp"
#include "dormant/series.hpp"

namespace dormant {

// Forms are h dx with h in K; outputs are read on the Frobenius twist, so the same
// numeric data describes C(h dx) = g dx^{(1)}.

// C(h dx) = (-h^{(p-1)})^{1/p} dx, valid on every curve model.
FFElem cartier(const FFElem& h);
// P^1 only: C(N/D dx) = D^{-1} C(N D^{p-1} dx) with the monomial rule on polynomials.
FFElem cartier_p1(const FFElem& h);

// f with f' = a when C(a dx) = 0, nullopt otherwise.
std::optional<FFElem> exact_primitive(const FFElem& a);
bool is_exact(const FFElem& a);

// C(h dx) = h dx.
bool is_cartier_fixed(const FFElem& h);

struct PreTangoReport {
  bool flat = false;
  bool pre_tango = false;
  std::optional<FFElem> generator;  // horizontal u: the section u eta
  std::optional<FFElem> cartier;    // g with C(u eta) = g dx
};

// nabla on Omega_log trivialized by eta: flat and C(u eta) = 0 for a horizontal u.
// Throws NotOmegaBundle for other labels.
PreTangoReport is_pre_tango(const LogConnection& c);

// Pre-Tango connection whose horizontal section is df: a = -dlog(f'/w), eta = w dx.
LogConnection pretango_from_function(const FFElem& f);

}  // namespace dormant
