#pragma once

// Test-side generators and independent oracles. Nothing here calls the routine it checks.

#include <boost/rational.hpp>
#include <random>
#include <vector>

#include "dormant/connection.hpp"
#include "dormant/curve.hpp"

namespace oracle {

using dormant::CurvePtr;
using dormant::FFElem;
using dormant::FFMatrix;
using dormant::fp_t;
using dormant::RatFunc;
using dormant::UPoly;

inline fp_t random_fp(std::mt19937_64& rng, fp_t p) { return static_cast<fp_t>(rng() % p); }

inline UPoly random_poly(std::mt19937_64& rng, fp_t p, int max_deg) {
  std::vector<fp_t> c(static_cast<std::size_t>(max_deg) + 1);
  for (auto& v : c) v = random_fp(rng, p);
  return UPoly(p, c);
}

inline UPoly random_nonzero_poly(std::mt19937_64& rng, fp_t p, int max_deg) {
  for (;;) {
    UPoly f = random_poly(rng, p, max_deg);
    if (!f.is_zero()) return f;
  }
}

inline RatFunc random_ratfunc(std::mt19937_64& rng, fp_t p, int max_deg) {
  return RatFunc::normalize(random_poly(rng, p, max_deg), random_nonzero_poly(rng, p, max_deg));
}

// Random element of K with components of bounded degree.
inline FFElem random_elem(std::mt19937_64& rng, const CurvePtr& c, int max_deg) {
  FFElem out = c->zero();
  FFElem ypow = c->one();
  for (int i = 0; i < c->degree(); ++i) {
    out += ypow.times(random_ratfunc(rng, c->p(), max_deg));
    if (i + 1 < c->degree()) ypow *= c->y();
  }
  return out;
}

inline FFElem random_nonzero_elem(std::mt19937_64& rng, const CurvePtr& c, int max_deg) {
  for (;;) {
    FFElem f = random_elem(rng, c, max_deg);
    if (!f.is_zero()) return f;
  }
}

// Psi(d/dx) by applying nabla_{d/dx} p times to each constant basis vector.
inline FFMatrix pfold_pcurvature(const FFMatrix& a) {
  const CurvePtr& c = a(0, 0).curve();
  const int n = a.n();
  FFMatrix out(c, n);
  for (int j = 0; j < n; ++j) {
    std::vector<FFElem> v(n, c->zero());
    v[j] = c->one();
    for (fp_t k = 0; k < c->p(); ++k) {
      std::vector<FFElem> w(n, c->zero());
      for (int i = 0; i < n; ++i) {
        w[i] = v[i].derivative();
        for (int l = 0; l < n; ++l) w[i] += a(i, l) * v[l];
      }
      v = std::move(w);
    }
    for (int i = 0; i < n; ++i) out(i, j) = v[i];
  }
  return out;
}

// R^p - R for a constant matrix over F_p.
inline std::vector<fp_t> frobenius_defect(const std::vector<fp_t>& r, int n, fp_t p) {
  auto mul = [&](const std::vector<fp_t>& x, const std::vector<fp_t>& y) {
    std::vector<fp_t> z(static_cast<std::size_t>(n * n), 0);
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k)
        for (int j = 0; j < n; ++j)
          z[i * n + j] = dormant::fp_add(z[i * n + j], dormant::fp_mul(x[i * n + k], y[k * n + j], p), p);
    return z;
  };
  std::vector<fp_t> pw = r;
  for (fp_t k = 1; k < p; ++k) pw = mul(pw, r);
  for (std::size_t i = 0; i < pw.size(); ++i) pw[i] = dormant::fp_sub(pw[i], r[i], p);
  return pw;
}

// Number of affine points of y^2 = x^3 + ax + b plus the point at infinity.
inline long long count_points(fp_t p, long long a, long long b) {
  long long n = 1;
  for (fp_t x = 0; x < p; ++x)
    for (fp_t y = 0; y < p; ++y) {
      const long long lhs = static_cast<long long>(y) * y % p;
      const long long rhs = ((static_cast<long long>(x) * x % p * x + a * x + b) % static_cast<long long>(p) + p) % p;
      if (lhs == rhs) ++n;
    }
  return n;
}

// Ordinary iff the trace of Frobenius is nonzero mod p.
inline bool ordinary_by_count(fp_t p, long long a, long long b) {
  const long long trace = static_cast<long long>(p) + 1 - count_points(p, a, b);
  return ((trace % static_cast<long long>(p)) + p) % p != 0;
}

// C(x^k dx) on the line: x^{(k+1)/p - 1} dx when p | k + 1, else 0.
inline RatFunc cartier_monomial(fp_t p, int k) {
  if ((k + 1) % static_cast<int>(p) != 0) return RatFunc(p);
  const int e = (k + 1) / static_cast<int>(p) - 1;
  return e >= 0 ? RatFunc(UPoly::monomial(p, 1, e)) : RatFunc(UPoly::monomial(p, 1, -e)).inverse();
}

// y = x^5 - x y^4 near [0:0:1] on the Raynaud curve (5, 1), by fixed-point iteration on
// coefficient vectors mod x^n.
inline std::vector<fp_t> raynaud51_branch(int n) {
  const fp_t p = 5;
  auto mul = [&](const std::vector<fp_t>& a, const std::vector<fp_t>& b) {
    std::vector<fp_t> c(n, 0);
    for (int i = 0; i < n; ++i)
      for (int j = 0; i + j < n; ++j) c[i + j] = (c[i + j] + a[i] * b[j]) % p;
    return c;
  };
  std::vector<fp_t> y(n, 0);
  for (int it = 0; it < n; ++it) {
    auto y2 = mul(y, y);
    auto y4 = mul(y2, y2);
    std::vector<fp_t> next(n, 0);
    if (n > 5) next[5] = 1;
    for (int i = 0; i + 1 < n; ++i) next[i + 1] = (next[i + 1] + p - y4[i]) % p;
    y = next;
  }
  return y;
}

using Q = boost::rational<long long>;

// 2g - 2 + (2g - 2 + r + sum tau^{-1}(mu_i)) / p, with mu_i = -eps_i.
inline Q dimension_formula(int g, const std::vector<fp_t>& mu, fp_t p) {
  long long s = 2LL * g - 2 + static_cast<long long>(mu.size());
  for (fp_t m : mu) s += m;
  return Q(2LL * g - 2) + Q(s, static_cast<long long>(p));
}

// Genus 0: a flat Omega_log structure exists iff p divides r - 2 + sum tau^{-1}(mu_i),
// and it is then unique.
inline long long genus0_flat_count(const std::vector<fp_t>& mu, fp_t p) {
  long long s = static_cast<long long>(mu.size()) - 2;
  for (fp_t m : mu) s += m;
  return s % static_cast<long long>(p) == 0 ? 1 : 0;
}

}  // namespace oracle
