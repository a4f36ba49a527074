#pragma once

// Classical number theory for order finding: gcd, modular powers, the
// brute-force order oracle, continued-fraction convergents, order recovery
// from a phase-register outcome, and factor extraction.
//
// All arithmetic is on std::uint64_t. Products are formed in 128 bits, so
// any modulus below 2^63 is safe; the simulator itself caps the work
// register far below that (N < 2^20 in practice).

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "shorcert/error.hpp"

namespace shorcert {

using u64 = std::uint64_t;

struct OrderFindingInstance {
  u64 modulus = 0;
  u64 base = 0;
  std::optional<u64> order;
};

struct Convergent {
  u64 numerator = 0;
  u64 denominator = 1;

  friend bool operator==(const Convergent&, const Convergent&) = default;
};

inline u64 gcd(u64 a, u64 b) {
  detail::require(a != 0 || b != 0, ErrorKind::invalid_argument,
                  "gcd(0, 0) is undefined");
  while (b != 0) {
    u64 r = a % b;
    a = b;
    b = r;
  }
  return a;
}

inline u64 mul_mod(u64 a, u64 b, u64 modulus) {
  return static_cast<u64>((static_cast<unsigned __int128>(a) * b) % modulus);
}

inline u64 mod_pow(u64 base, u64 exponent, u64 modulus) {
  detail::require(modulus >= 2, ErrorKind::invalid_argument,
                  "mod_pow: modulus must be >= 2");
  u64 result = 1;
  base %= modulus;
  while (exponent > 0) {
    if (exponent & 1) result = mul_mod(result, base, modulus);
    base = mul_mod(base, base, modulus);
    exponent >>= 1;
  }
  return result;
}

/// a^(2^k) mod N by k squarings, so large k never forms 2^k.
inline u64 mod_pow2k(u64 base, unsigned k, u64 modulus) {
  u64 value = base % modulus;
  for (unsigned i = 0; i < k; ++i) value = mul_mod(value, value, modulus);
  return value;
}

/// Brute-force multiplicative order. Used as the independent oracle.
inline u64 multiplicative_order(u64 base, u64 modulus) {
  detail::require(modulus >= 2 && base > 1 && base < modulus,
                  ErrorKind::invalid_argument,
                  "multiplicative_order: need 1 < a < N");
  detail::require(gcd(base, modulus) == 1, ErrorKind::not_coprime,
                  "multiplicative_order: gcd(a, N) != 1 for a=" +
                      std::to_string(base) + ", N=" + std::to_string(modulus));
  u64 value = base;
  u64 r = 1;
  while (value != 1) {
    value = mul_mod(value, base, modulus);
    ++r;
  }
  return r;
}

inline u64 modular_inverse(u64 a, u64 modulus) {
  // Extended Euclid on signed 128-bit to stay clear of overflow.
  __int128 old_r = static_cast<__int128>(a % modulus), r = modulus;
  __int128 old_s = 1, s = 0;
  while (r != 0) {
    __int128 q = old_r / r;
    __int128 tmp = old_r - q * r;
    old_r = r;
    r = tmp;
    tmp = old_s - q * s;
    old_s = s;
    s = tmp;
  }
  detail::require(old_r == 1, ErrorKind::not_coprime,
                  "modular_inverse: argument not invertible");
  __int128 m = modulus;
  return static_cast<u64>(((old_s % m) + m) % m);
}

/// Continued-fraction convergents of y/L, in lowest terms, with strictly
/// increasing denominators. When two successive convergents share a
/// denominator (partial quotient 1 right after the integer part) only the
/// later one is kept. The last entry is y/L reduced.
inline std::vector<Convergent> convergents(u64 y, u64 grid) {
  detail::require(grid > 0 && y < grid, ErrorKind::invalid_argument,
                  "convergents: need 0 <= y < L");
  std::vector<Convergent> out;
  u64 num = y, den = grid;
  // h_{-2}=0, h_{-1}=1; k_{-2}=1, k_{-1}=0
  u64 h_prev2 = 0, h_prev1 = 1;
  u64 k_prev2 = 1, k_prev1 = 0;
  while (true) {
    u64 quotient = num / den;
    u64 h = quotient * h_prev1 + h_prev2;
    u64 k = quotient * k_prev1 + k_prev2;
    Convergent c{h, k};
    if (!out.empty() && out.back().denominator == k)
      out.back() = c;
    else
      out.push_back(c);
    h_prev2 = h_prev1;
    h_prev1 = h;
    k_prev2 = k_prev1;
    k_prev1 = k;
    u64 rem = num % den;
    if (rem == 0) break;
    num = den;
    den = rem;
  }
  return out;
}

struct RecoverOptions {
  u64 max_order = 0;       // 0 means "use N"
  u64 multiple_cap = 8;    // largest m tried for m * d
};

/// Order recovery from one outcome. Convergents whose value is an integer
/// (0/1, 1/1) carry no phase information and are skipped, so y = 0 never
/// yields an order.
inline std::optional<u64> recover_order(u64 y, u64 grid, u64 base, u64 modulus,
                                        RecoverOptions options = {}) {
  detail::require(gcd(base, modulus) == 1, ErrorKind::not_coprime,
                  "recover_order: gcd(a, N) != 1");
  const u64 r_max = options.max_order == 0 ? modulus : options.max_order;
  const auto cands = convergents(y, grid);

  std::optional<u64> best;
  auto consider = [&](u64 d) {
    if (d == 0 || d > r_max) return;
    if (best && *best <= d) return;
    if (mod_pow(base, d, modulus) == 1) best = d;
  };

  for (const auto& c : cands) {
    if (c.numerator % c.denominator == 0) continue;
    consider(c.denominator);
  }
  if (best) return best;

  for (const auto& c : cands) {
    if (c.numerator % c.denominator == 0) continue;
    for (u64 m = 2; m <= options.multiple_cap; ++m) {
      if (c.denominator > r_max / m) break;
      consider(m * c.denominator);
    }
  }
  return best;
}

/// Shor's classical step. Returns the sorted pair (f, N/f) built from the
/// non-trivial gcd(a^{r/2} -/+ 1, N), or nullopt for odd r or
/// a^{r/2} = -1 mod N.
inline std::optional<std::pair<u64, u64>> extract_factors(u64 base, u64 order,
                                                          u64 modulus) {
  detail::require(modulus >= 3 && order >= 1 &&
                      mod_pow(base, order, modulus) == 1,
                  ErrorKind::invalid_order,
                  "extract_factors: a^r != 1 mod N (a=" + std::to_string(base) +
                      ", r=" + std::to_string(order) +
                      ", N=" + std::to_string(modulus) + ")");
  if (order % 2 != 0) return std::nullopt;
  const u64 half = mod_pow(base, order / 2, modulus);
  if (half == modulus - 1) return std::nullopt;

  for (u64 candidate : {(half + modulus - 1) % modulus, (half + 1) % modulus}) {
    if (candidate == 0) continue;
    u64 f = gcd(candidate, modulus);
    if (f > 1 && f < modulus) {
      u64 g = modulus / f;
      return f < g ? std::pair{f, g} : std::pair{g, f};
    }
  }
  return std::nullopt;
}

inline bool is_prime(u64 n) {
  if (n < 2) return false;
  for (u64 d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

/// True when n = p^k for a prime p and k >= 2.
inline bool is_prime_power(u64 n) {
  if (n < 4) return false;
  u64 p = 2;
  while (p * p <= n && n % p != 0) ++p;
  if (n % p != 0) return false;  // n itself prime
  while (n % p == 0) n /= p;
  return n == 1;
}

inline unsigned ceil_log2(u64 n) {
  unsigned bits = 0;
  while ((u64{1} << bits) < n) ++bits;
  return bits;
}

/// Fraction of bases 1 < a < N, gcd(a, N) = 1, whose order is even with
/// a^{r/2} != -1 mod N. Exhaustive, for small N.
inline double classical_success_fraction(u64 modulus) {
  u64 coprime = 0, good = 0;
  for (u64 a = 2; a < modulus; ++a) {
    if (gcd(a, modulus) != 1) continue;
    ++coprime;
    u64 r = multiplicative_order(a, modulus);
    if (r % 2 == 0 && mod_pow(a, r / 2, modulus) != modulus - 1) ++good;
  }
  detail::require(coprime > 0, ErrorKind::invalid_argument,
                  "classical_success_fraction: no coprime bases");
  return static_cast<double>(good) / static_cast<double>(coprime);
}

}  // namespace shorcert
