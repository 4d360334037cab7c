#pragma once

#include <cstdint>

namespace dormant {

// Residues modulo an odd prime p < 2^31, always kept in [0, p).
using fp_t = std::uint32_t;

bool is_prime(std::uint64_t n);

inline fp_t fp_add(fp_t a, fp_t b, fp_t p) {
  fp_t s = a + b;
  return s >= p ? s - p : s;
}

inline fp_t fp_sub(fp_t a, fp_t b, fp_t p) { return a >= b ? a - b : a + p - b; }

inline fp_t fp_neg(fp_t a, fp_t p) { return a == 0 ? 0 : p - a; }

inline fp_t fp_mul(fp_t a, fp_t b, fp_t p) {
  return static_cast<fp_t>(static_cast<std::uint64_t>(a) * b % p);
}

fp_t fp_pow(fp_t a, std::uint64_t e, fp_t p);

// Throws ZeroDenominator for a = 0.
fp_t fp_inv(fp_t a, fp_t p);

fp_t fp_from_int(long long v, fp_t p);

// Signed representative in (-p/2, p/2].
long long fp_signed(fp_t a, fp_t p);

// Validated modulus; the only way to bring a user-supplied p into the library.
class PrimeField {
 public:
  explicit PrimeField(std::uint64_t p);
  fp_t p() const noexcept { return p_; }

 private:
  fp_t p_;
};

}  // namespace dormant
