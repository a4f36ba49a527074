#pragma once

// Certification of a QPE histogram: continued-fraction acceptance windows,
// uniform baseline, exact one-sided binomial test, excess mass, and the
// success-probability / expected-runtime model.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "shorcert/binomial.hpp"
#include "shorcert/error.hpp"
#include "shorcert/numtheory.hpp"
#include "shorcert/sim.hpp"

namespace shorcert {

/// Inclusive: |y - c| <= w0 (2 w0 + 1 bins per peak).
/// Strict: c - w0 <= y < c + w0 (2 w0 bins per peak, tiling L/r bins in
/// total when 2 r^2 divides L).
enum class WindowMode { strict, inclusive };

inline const char* to_string(WindowMode m) { return m == WindowMode::strict ? "strict" : "inclusive"; }

inline WindowMode parse_window_mode(const std::string& s) {
  if (s == "strict") return WindowMode::strict;
  if (s == "inclusive") return WindowMode::inclusive;
  detail::fail(ErrorKind::config, "unknown window mode '" + s + "' (expected strict|inclusive)");
}

struct AcceptanceWindows {
  u64 grid = 0;  // L
  u64 order = 0;
  u64 half_width = 0;  // w0
  WindowMode mode = WindowMode::inclusive;
  std::vector<u64> centers;
  std::vector<u64> bins;       // sorted, deduplicated
  std::vector<bool> accepted;  // membership, length L

  bool contains(u64 y) const { return y < accepted.size() && accepted[y]; }
};

/// w0 = floor(L / (2 r^2)).
inline u64 window_halfwidth(u64 grid, u64 order) {
  detail::require(order >= 1, ErrorKind::invalid_argument, "window_halfwidth: r must be >= 1");
  detail::require(grid >= 1, ErrorKind::invalid_argument, "window_halfwidth: L must be >= 1");
  return grid / (2 * order * order);
}

/// round-half-up(s L / r) mod L.
inline u64 window_center(u64 s, u64 grid, u64 order) {
  return ((2 * s * grid + order) / (2 * order)) % grid;
}

inline AcceptanceWindows acceptance_set(u64 grid, u64 order,
                                        WindowMode mode = WindowMode::inclusive) {
  detail::require(grid >= 2 && (grid & (grid - 1)) == 0, ErrorKind::invalid_argument,
                  "acceptance_set: L must be a power of two >= 2");
  AcceptanceWindows w;
  w.grid = grid;
  w.order = order;
  w.half_width = window_halfwidth(grid, order);
  w.mode = mode;
  w.accepted.assign(grid, false);
  const auto g = static_cast<std::int64_t>(grid);
  const auto hw = static_cast<std::int64_t>(w.half_width);
  const std::int64_t lo = -hw;
  const std::int64_t hi = mode == WindowMode::inclusive ? hw : hw - 1;
  for (u64 s = 0; s < order; ++s) {
    const u64 c = window_center(s, grid, order);
    w.centers.push_back(c);
    for (std::int64_t d = lo; d <= hi; ++d) {
      const auto y = static_cast<u64>(((static_cast<std::int64_t>(c) + d) % g + g) % g);
      w.accepted[y] = true;
    }
  }
  for (u64 y = 0; y < grid; ++y)
    if (w.accepted[y]) w.bins.push_back(y);
  return w;
}

/// Uniform-outcome probability of landing in the windows: |bins| / L.
inline double baseline(const AcceptanceWindows& w) {
  return static_cast<double>(w.bins.size()) / static_cast<double>(w.grid);
}

inline u64 count_hits(const Histogram& h, const AcceptanceWindows& w) {
  detail::require(h.grid() == w.grid, ErrorKind::invalid_argument,
                  "count_hits: histogram has " + std::to_string(h.grid()) +
                      " bins, windows expect " + std::to_string(w.grid));
  u64 k = 0;
  for (u64 y : w.bins) k += h.counts[y];
  return k;
}

/// Probability mass of `p` inside the windows.
inline double window_mass(const std::vector<double>& p, const AcceptanceWindows& w) {
  detail::require(p.size() == w.grid, ErrorKind::invalid_argument,
                  "window_mass: distribution length does not match L");
  double m = 0.0;
  for (u64 y : w.bins) m += p[y];
  return m;
}

/// Smallest integer k >= 0 with p_hat >= (log2 N)^{-k}.
inline std::optional<unsigned> polylog_exponent(double p_hat, u64 modulus) {
  if (!(p_hat > 0.0) || modulus < 3) return std::nullopt;
  const double log_n = std::log2(static_cast<double>(modulus));
  double bound = 1.0;
  for (unsigned k = 0; k <= 4096; ++k) {
    if (p_hat >= bound) return k;
    bound /= log_n;
  }
  return std::nullopt;
}

enum class Verdict { pass, fail };

inline const char* to_string(Verdict v) { return v == Verdict::pass ? "PASS" : "FAIL"; }

struct CertificationReport {
  u64 modulus = 0;
  u64 base = 0;
  u64 order = 0;
  unsigned phase_bits = 0;
  u64 grid = 0;
  u64 half_width = 0;
  WindowMode mode = WindowMode::inclusive;
  u64 accepted_bins = 0;

  double baseline = 0.0;     // b
  u64 hits = 0;              // k
  u64 shots = 0;             // n
  double p_hat = 0.0;
  double excess = 0.0;       // p_hat - b
  double p_value = 0.0;      // exact, may underflow to 0
  double log10_p_value = 0.0;
  double normal_approx_p_value = 0.0;
  double alpha = 0.01;
  Verdict verdict = Verdict::fail;
  std::optional<unsigned> polylog_k;
};

/// Builds a report from a hit count. r is the oracle order.
inline CertificationReport certify_counts(u64 hits, u64 shots, u64 grid, u64 modulus, u64 base,
                                          u64 order, double alpha = 0.01,
                                          WindowMode mode = WindowMode::inclusive) {
  detail::require(alpha > 0.0 && alpha < 1.0, ErrorKind::invalid_argument,
                  "certify: alpha must lie in (0, 1)");
  detail::require(shots >= 1, ErrorKind::invalid_argument, "certify: histogram has zero shots");
  detail::require(hits <= shots, ErrorKind::invalid_argument, "certify: hits exceed shots");
  const AcceptanceWindows w = acceptance_set(grid, order, mode);
  CertificationReport r;
  r.modulus = modulus;
  r.base = base;
  r.order = order;
  r.grid = grid;
  unsigned t = 0;
  while ((u64{1} << t) < grid) ++t;
  r.phase_bits = t;
  r.half_width = w.half_width;
  r.mode = mode;
  r.accepted_bins = w.bins.size();
  r.baseline = baseline(w);
  r.hits = hits;
  r.shots = shots;
  r.p_hat = static_cast<double>(hits) / static_cast<double>(shots);
  r.excess = r.p_hat - r.baseline;
  r.log10_p_value = binomial_log10_pvalue(hits, shots, r.baseline);
  r.p_value = binomial_pvalue(hits, shots, r.baseline);
  r.normal_approx_p_value = normal_approx_pvalue(hits, shots, r.baseline);
  r.alpha = alpha;
  r.verdict = r.p_value <= alpha ? Verdict::pass : Verdict::fail;
  r.polylog_k = polylog_exponent(r.p_hat, modulus);
  return r;
}

/// Certifies a histogram. order = 0 computes the order classically.
inline CertificationReport certify(const Histogram& h, u64 modulus, u64 base, u64 order = 0,
                                   double alpha = 0.01, WindowMode mode = WindowMode::inclusive) {
  if (order == 0) order = multiplicative_order(base, modulus);
  const AcceptanceWindows w = acceptance_set(h.grid(), order, mode);
  return certify_counts(count_hits(h, w), h.shots, h.grid(), modulus, base, order, alpha, mode);
}

struct SuccessModel {
  double p_succ = 0.0;
  double expected_repetitions = 0.0;
  double run_cost = 0.0;  // (log2 N)^2 log2 log2 N
  double expected_runtime_units = 0.0;
};

inline double run_cost_units(u64 modulus) {
  detail::require(modulus >= 3, ErrorKind::invalid_argument, "run cost needs N >= 3");
  const double l = std::log2(static_cast<double>(modulus));
  return l * l * std::log2(l);
}

/// p_succ = window mass * nu; nu = 1/2 is the conservative default.
inline SuccessModel success_model(double mass, double nu = 0.5, u64 modulus = 0) {
  detail::require(mass > 0.0 && mass <= 1.0, ErrorKind::invalid_argument,
                  "success_model: window mass must lie in (0, 1]");
  detail::require(nu > 0.0 && nu <= 1.0, ErrorKind::invalid_argument,
                  "success_model: nu must lie in (0, 1]");
  SuccessModel m;
  m.p_succ = mass * nu;
  m.expected_repetitions = 1.0 / m.p_succ;
  if (modulus >= 3) {
    m.run_cost = run_cost_units(modulus);
    m.expected_runtime_units = m.expected_repetitions * m.run_cost;
  }
  return m;
}

inline std::string format_pvalue(double p, double log10_p) {
  char buf[64];
  if (p >= 1e-300) {
    std::snprintf(buf, sizeof buf, "%.2e", p);
  } else {
    std::snprintf(buf, sizeof buf, "10^%.2f", log10_p);
  }
  return buf;
}

/// `N=35 a=4: FAIL (p=1.17e-02, Δ=+0.013)`
inline std::string verdict_line(const CertificationReport& r) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "N=%llu a=%llu: %s (p=%s, \xCE\x94=%+.3f)",
                static_cast<unsigned long long>(r.modulus),
                static_cast<unsigned long long>(r.base), to_string(r.verdict),
                format_pvalue(r.p_value, r.log10_p_value).c_str(), r.excess);
  return buf;
}

inline nlohmann::json to_json(const CertificationReport& r) {
  nlohmann::json j;
  j["N"] = r.modulus;
  j["a"] = r.base;
  j["r"] = r.order;
  j["t"] = r.phase_bits;
  j["L"] = r.grid;
  j["w0"] = r.half_width;
  j["mode"] = to_string(r.mode);
  j["accepted_bins"] = r.accepted_bins;
  j["baseline"] = r.baseline;
  j["hits"] = r.hits;
  j["shots"] = r.shots;
  j["p_hat"] = r.p_hat;
  j["excess"] = r.excess;
  j["p_value"] = r.p_value >= 1e-300 ? nlohmann::json(r.p_value) : nlohmann::json(nullptr);
  j["log10_p_value"] = r.log10_p_value;
  j["normal_approx_p_value"] = r.normal_approx_p_value;
  j["alpha"] = r.alpha;
  j["verdict"] = to_string(r.verdict);
  j["polylog_k"] = r.polylog_k ? nlohmann::json(*r.polylog_k) : nlohmann::json(nullptr);
  return j;
}

}  // namespace shorcert
