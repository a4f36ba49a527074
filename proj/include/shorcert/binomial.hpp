#pragma once

// Exact one-sided binomial tail Pr[X >= k], X ~ Bin(n, b), summed in log
// space. Terms come from lgammal (x87 extended precision on x86-64) so the
// tail keeps ~1e-15 relative accuracy far below double's underflow point.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>

#include "shorcert/error.hpp"

namespace shorcert {

inline long double binomial_log_pmf(std::uint64_t n, std::uint64_t j, long double log_b,
                                    long double log_q) {
  const long double ln = static_cast<long double>(n);
  const long double lj = static_cast<long double>(j);
  return std::lgamma(ln + 1.0L) - std::lgamma(lj + 1.0L) - std::lgamma(ln - lj + 1.0L) +
         lj * log_b + (ln - lj) * log_q;
}

/// Natural log of Pr[X >= k].
inline long double binomial_log_tail(std::uint64_t k, std::uint64_t n, double b) {
  detail::require(b > 0.0 && b < 1.0, ErrorKind::invalid_argument,
                  "binomial tail: baseline must lie in (0, 1)");
  detail::require(k <= n, ErrorKind::invalid_argument,
                  "binomial tail: hits exceed shots (" + std::to_string(k) + " > " +
                      std::to_string(n) + ")");
  if (k == 0) return 0.0L;

  const long double log_b = std::log(static_cast<long double>(b));
  const long double log_q = std::log1p(-static_cast<long double>(b));
  // Mode of Bin(n, b); terms decrease monotonically beyond it.
  const auto mode = static_cast<std::uint64_t>(
      std::floor(static_cast<long double>(n + 1) * static_cast<long double>(b)));
  const std::uint64_t peak = std::max(k, std::min(mode, n));
  const long double log_max = binomial_log_pmf(n, peak, log_b, log_q);

  long double sum = 0.0L;
  for (std::uint64_t j = k; j <= n; ++j) {
    const long double lt = binomial_log_pmf(n, j, log_b, log_q) - log_max;
    sum += std::exp(lt);
    if (j > peak && lt < -60.0L) break;
  }
  return std::min(0.0L, log_max + std::log(sum));
}

inline double binomial_pvalue(std::uint64_t k, std::uint64_t n, double b) {
  return static_cast<double>(std::exp(binomial_log_tail(k, n, b)));
}

inline double binomial_log10_pvalue(std::uint64_t k, std::uint64_t n, double b) {
  return static_cast<double>(binomial_log_tail(k, n, b) / std::log(10.0L));
}

/// Normal approximation with continuity correction, 1 - Phi((k - 1/2 - nb) / sd).
/// Diagnostic only; verdicts use the exact tail.
inline double normal_approx_pvalue(std::uint64_t k, std::uint64_t n, double b) {
  detail::require(b > 0.0 && b < 1.0, ErrorKind::invalid_argument,
                  "normal approximation: baseline must lie in (0, 1)");
  const double mean = static_cast<double>(n) * b;
  const double sd = std::sqrt(static_cast<double>(n) * b * (1.0 - b));
  const double z = (static_cast<double>(k) - 0.5 - mean) / sd;
  return 0.5 * std::erfc(z / std::sqrt(2.0));
}

}  // namespace shorcert
