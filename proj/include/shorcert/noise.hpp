#pragma once

// Outcome-level decoherence models.
//
// Phase truncation keeps only the leading `kept_bits` fractional bits of
// each eigenphase. An eigenphase s/r survives when that truncation leaves it
// unchanged (s/r * 2^kept_bits is an integer); each survivor produces a
// cos^2 lobe of period L centred at L * s/r, and the lobes are mixed with
// equal weight. Uniform mixing interpolates between any distribution and the
// flat spectrum.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "shorcert/error.hpp"
#include "shorcert/numtheory.hpp"

namespace shorcert {

struct NoiseSpec {
  enum class Kind { none, phase_truncation, uniform_mix };

  Kind kind = Kind::none;
  unsigned kept_bits = 1;
  bool exclude_zero_phase = false;
  double lambda = 0.0;

  static NoiseSpec none() { return {}; }
  static NoiseSpec truncation(unsigned kept = 1, bool exclude_zero = false) {
    NoiseSpec s;
    s.kind = Kind::phase_truncation;
    s.kept_bits = kept;
    s.exclude_zero_phase = exclude_zero;
    s.validate();
    return s;
  }
  static NoiseSpec uniform(double lambda) {
    NoiseSpec s;
    s.kind = Kind::uniform_mix;
    s.lambda = lambda;
    s.validate();
    return s;
  }

  void validate() const {
    detail::require(kept_bits >= 1 && kept_bits <= 62, ErrorKind::config,
                    "noise: kept_bits must be in [1, 62]");
    detail::require(lambda >= 0.0 && lambda <= 1.0, ErrorKind::config,
                    "noise: mixing weight must be in [0, 1]");
  }

  /// none | trunc:KEPT[,nozero] | uniform:LAMBDA
  static NoiseSpec parse(const std::string& text) {
    if (text.empty() || text == "none") return none();
    auto colon = text.find(':');
    const std::string head = text.substr(0, colon);
    const std::string tail = colon == std::string::npos ? "" : text.substr(colon + 1);
    try {
      if (head == "trunc") {
        auto comma = tail.find(',');
        const std::string kept = tail.substr(0, comma);
        bool nozero = false;
        if (comma != std::string::npos) {
          detail::require(tail.substr(comma + 1) == "nozero", ErrorKind::config,
                          "noise: unknown truncation flag in '" + text + "'");
          nozero = true;
        }
        std::size_t used = 0;
        const unsigned long k = kept.empty() ? 1 : std::stoul(kept, &used);
        detail::require(kept.empty() || used == kept.size(), ErrorKind::config,
                        "noise: bad kept-bit count in '" + text + "'");
        return truncation(static_cast<unsigned>(k), nozero);
      }
      if (head == "uniform") {
        std::size_t used = 0;
        const double lambda = std::stod(tail, &used);
        detail::require(used == tail.size(), ErrorKind::config,
                        "noise: bad mixing weight in '" + text + "'");
        return uniform(lambda);
      }
    } catch (const std::logic_error&) {
      detail::fail(ErrorKind::config, "noise: cannot parse '" + text + "'");
    }
    detail::fail(ErrorKind::config,
                 "noise: expected none|trunc:KEPT[,nozero]|uniform:LAMBDA, got '" + text + "'");
  }

  std::string str() const {
    std::ostringstream os;
    switch (kind) {
      case Kind::none: os << "none"; break;
      case Kind::phase_truncation:
        os << "trunc:" << kept_bits << (exclude_zero_phase ? ",nozero" : "");
        break;
      case Kind::uniform_mix: os << "uniform:" << lambda; break;
    }
    return os.str();
  }
};

struct Eigenphase {
  u64 numerator = 0;    // s, in [0, r)
  u64 denominator = 1;  // r

  double value() const { return static_cast<double>(numerator) / static_cast<double>(denominator); }
  friend bool operator==(const Eigenphase&, const Eigenphase&) = default;
};

/// Eigenphases s/r, 0 <= s < r, whose binary expansion is unchanged by
/// truncation to `kept_bits` fractional bits.
inline std::vector<Eigenphase> stable_eigenphases(u64 order, bool exclude_zero_phase,
                                                  unsigned kept_bits = 1) {
  detail::require(order >= 1, ErrorKind::invalid_argument, "stable_eigenphases: r must be >= 1");
  detail::require(kept_bits >= 1 && kept_bits <= 62, ErrorKind::invalid_argument,
                  "stable_eigenphases: kept_bits must be in [1, 62]");
  std::vector<Eigenphase> out;
  const u64 scale = u64{1} << kept_bits;
  for (u64 s = 0; s < order; ++s) {
    if (s == 0 && exclude_zero_phase) continue;
    if (mul_mod(s, scale, order) == 0) out.push_back({s, order});
  }
  return out;
}

/// Normalized lobe p(x) ~ cos^2(pi (x - center) / L) over x in [0, L).
/// cos^2 has period L in x, so a lobe at 0 wraps across the right edge.
inline std::vector<double> cos2_lobe(double center, unsigned t) {
  const u64 grid = u64{1} << t;
  std::vector<double> p(grid);
  double total = 0.0;
  for (u64 x = 0; x < grid; ++x) {
    const double c = std::cos(std::numbers::pi * (static_cast<double>(x) - center) /
                              static_cast<double>(grid));
    p[x] = c * c;
    total += p[x];
  }
  for (auto& v : p) v /= total;
  return p;
}

/// Lobe centres x* = L * phi_eff for the truncation model.
inline std::vector<double> truncation_lobe_centers(u64 order, unsigned t, const NoiseSpec& spec) {
  detail::require(spec.kind == NoiseSpec::Kind::phase_truncation, ErrorKind::invalid_argument,
                  "truncation model needs a phase_truncation noise spec");
  const double grid = std::ldexp(1.0, static_cast<int>(t));
  std::vector<double> centers;
  for (const auto& phase : stable_eigenphases(order, spec.exclude_zero_phase, spec.kept_bits))
    centers.push_back(grid * phase.value());
  detail::require(!centers.empty(), ErrorKind::degenerate_model,
                  "no stable eigenphase survives for r=" + std::to_string(order));
  return centers;
}

inline std::vector<double> truncated_phase_distribution(u64 order, unsigned t,
                                                        const NoiseSpec& spec) {
  detail::require(t >= 1 && t <= 30, ErrorKind::invalid_argument,
                  "truncated_phase_distribution: t must be in [1, 30]");
  const auto centers = truncation_lobe_centers(order, t, spec);
  std::vector<double> p(std::size_t{1} << t, 0.0);
  const double weight = 1.0 / static_cast<double>(centers.size());
  for (double c : centers) {
    const auto lobe = cos2_lobe(c, t);
    for (std::size_t x = 0; x < p.size(); ++x) p[x] += weight * lobe[x];
  }
  return p;
}

inline std::vector<double> mix_with_uniform(const std::vector<double>& p, double lambda) {
  detail::require(lambda >= 0.0 && lambda <= 1.0, ErrorKind::invalid_argument,
                  "mix_with_uniform: lambda must be in [0, 1]");
  detail::require(!p.empty(), ErrorKind::invalid_argument, "mix_with_uniform: empty input");
  const double flat = lambda / static_cast<double>(p.size());
  std::vector<double> out(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) out[i] = (1.0 - lambda) * p[i] + flat;
  return out;
}

/// Applies `spec` to a noiseless outcome distribution over t bits for a
/// base of order r.
inline std::vector<double> apply_noise(const std::vector<double>& ideal, u64 order, unsigned t,
                                       const NoiseSpec& spec) {
  switch (spec.kind) {
    case NoiseSpec::Kind::none: return ideal;
    case NoiseSpec::Kind::uniform_mix: return mix_with_uniform(ideal, spec.lambda);
    case NoiseSpec::Kind::phase_truncation: return truncated_phase_distribution(order, t, spec);
  }
  return ideal;
}

}  // namespace shorcert
