#include "dormant/fp.hpp"

#include "dormant/error.hpp"

namespace dormant {

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

fp_t fp_pow(fp_t a, std::uint64_t e, fp_t p) {
  std::uint64_t r = 1 % p, b = a % p;
  while (e) {
    if (e & 1) r = r * b % p;
    b = b * b % p;
    e >>= 1;
  }
  return static_cast<fp_t>(r);
}

fp_t fp_inv(fp_t a, fp_t p) {
  if (a % p == 0) raise(ErrorCode::ZeroDenominator, "inverse of 0 in F_p");
  long long t = 0, nt = 1, r = p, nr = a % p;
  while (nr) {
    long long q = r / nr;
    long long tmp = t - q * nt;
    t = nt;
    nt = tmp;
    tmp = r - q * nr;
    r = nr;
    nr = tmp;
  }
  if (t < 0) t += p;
  return static_cast<fp_t>(t);
}

fp_t fp_from_int(long long v, fp_t p) {
  long long r = v % static_cast<long long>(p);
  if (r < 0) r += p;
  return static_cast<fp_t>(r);
}

long long fp_signed(fp_t a, fp_t p) {
  return a > p / 2 ? static_cast<long long>(a) - static_cast<long long>(p) : a;
}

PrimeField::PrimeField(std::uint64_t p) {
  if (p < 3 || p >= (1ULL << 31) || !is_prime(p))
    raise(ErrorCode::NotPrime, "modulus must be an odd prime below 2^31, got " + std::to_string(p));
  p_ = static_cast<fp_t>(p);
}

}  // namespace dormant
