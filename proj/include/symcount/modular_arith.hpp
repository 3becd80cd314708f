#pragma once

// 64-bit modular arithmetic: products, powers, inverses, primality and
// primitive roots for the prime fields used by the modular counter.

#include "symcount/core.hpp"

#include <cstdint>
#include <numeric>
#include <vector>

namespace symcount::modarith {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

constexpr u64 mul_mod(u64 a, u64 b, u64 m) {
  return static_cast<u64>(static_cast<u128>(a) * b % m);
}

constexpr u64 pow_mod(u64 base, u64 exp, u64 m) {
  u64 result = 1 % m;
  base %= m;
  while (exp != 0) {
    if (exp & 1U) result = mul_mod(result, base, m);
    base = mul_mod(base, base, m);
    exp >>= 1U;
  }
  return result;
}

/// Inverse of a modulo prime p; a must be nonzero mod p.
constexpr u64 inv_mod(u64 a, u64 p) { return pow_mod(a, p - 2, p); }

/// Deterministic Miller-Rabin for all 64-bit inputs.
constexpr bool is_prime(u64 n) {
  if (n < 2) return false;
  for (u64 small : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    if (n % small == 0) return n == small;
  }
  u64 d = n - 1;
  int s = 0;
  while ((d & 1U) == 0) {
    d >>= 1U;
    ++s;
  }
  for (u64 a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    u64 x = pow_mod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = mul_mod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

/// Distinct prime factors by trial division (inputs here are well below 2^40).
inline std::vector<u64> prime_factors(u64 m) {
  std::vector<u64> out;
  for (u64 f = 2; f * f <= m; ++f) {
    if (m % f == 0) {
      out.push_back(f);
      while (m % f == 0) m /= f;
    }
  }
  if (m > 1) out.push_back(m);
  return out;
}

/// Smallest generator of the multiplicative group mod prime p.
inline u64 primitive_root(u64 p) {
  if (p == 2) return 1;
  const auto factors = prime_factors(p - 1);
  for (u64 g = 2; g < p; ++g) {
    bool ok = true;
    for (u64 f : factors) {
      if (pow_mod(g, (p - 1) / f, p) == 1) {
        ok = false;
        break;
      }
    }
    if (ok) return g;
  }
  throw Error(ErrorKind::no_prime_found, "no primitive root mod " + std::to_string(p));
}

/// Multiplicative order of a modulo prime p (a nonzero).
inline u64 multiplicative_order(u64 a, u64 p) {
  u64 order = p - 1;
  for (u64 f : prime_factors(p - 1)) {
    while (order % f == 0 && pow_mod(a, order / f, p) == 1) order /= f;
  }
  return order;
}

/// x mod d for 32-bit x via a precomputed 64-bit reciprocal (Lemire et al.).
class FastMod32 {
 public:
  explicit FastMod32(std::uint32_t d) : d_(d), m_(~u64{0} / d + 1) {}

  std::uint32_t operator()(std::uint32_t x) const {
    const u64 low = m_ * x;
    return static_cast<std::uint32_t>((static_cast<u128>(low) * d_) >> 64U);
  }

 private:
  u64 d_;
  u64 m_;
};

}  // namespace symcount::modarith
