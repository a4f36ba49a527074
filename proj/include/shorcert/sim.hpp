#pragma once

// Dense statevector engine, shot sampling, and the closed-form ideal QPE
// outcome distribution.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <string>
#include <vector>

#include "shorcert/circuit.hpp"
#include "shorcert/error.hpp"
#include "shorcert/numtheory.hpp"
#include "shorcert/rng.hpp"

namespace shorcert {

using Complex = std::complex<double>;

/// Amplitude index bit q is qubit q.
inline constexpr const char* kBitOrder = "little-endian";

class StateVector {
 public:
  static constexpr unsigned kMaxQubits = 26;

  explicit StateVector(unsigned qubits, u64 basis = 0) : qubits_(qubits) {
    detail::require(qubits <= kMaxQubits, ErrorKind::capacity,
                    "statevector of " + std::to_string(qubits) + " qubits exceeds the " +
                        std::to_string(kMaxQubits) + "-qubit dense limit");
    detail::require(basis < (u64{1} << qubits), ErrorKind::invalid_argument,
                    "initial basis state out of range");
    amps_.assign(std::size_t{1} << qubits, Complex{0.0, 0.0});
    amps_[basis] = 1.0;
  }

  unsigned qubit_count() const noexcept { return qubits_; }
  std::size_t dimension() const noexcept { return amps_.size(); }
  const char* bit_order() const noexcept { return kBitOrder; }

  std::vector<Complex>& amplitudes() noexcept { return amps_; }
  const std::vector<Complex>& amplitudes() const noexcept { return amps_; }
  const Complex& operator[](std::size_t i) const { return amps_[i]; }

  double norm_squared() const {
    double s = 0.0;
    for (const auto& a : amps_) s += std::norm(a);
    return s;
  }

 private:
  unsigned qubits_;
  std::vector<Complex> amps_;
};

namespace detail {

inline u64 mask_of(const std::vector<Qubit>& qs) {
  u64 m = 0;
  for (Qubit q : qs) m |= u64{1} << q;
  return m;
}

/// Calls f(i) for every q-bit index whose `fixed` bits equal `value`.
template <typename F>
void for_each_fixed(unsigned q, u64 fixed, u64 value, F&& f) {
  const u64 all = (q == 64) ? ~u64{0} : ((u64{1} << q) - 1);
  const u64 free = all & ~fixed;
  u64 s = 0;
  while (true) {
    f(s | value);
    if (s == free) break;
    s = (s - free) & free;
  }
}

inline u64 extract_bits(u64 index, const std::vector<Qubit>& qs) {
  u64 v = 0;
  for (std::size_t i = 0; i < qs.size(); ++i) v |= ((index >> qs[i]) & 1) << i;
  return v;
}

inline u64 deposit_bits(u64 index, const std::vector<Qubit>& qs, u64 v) {
  for (std::size_t i = 0; i < qs.size(); ++i) {
    const u64 bit = u64{1} << qs[i];
    index = ((v >> i) & 1) ? (index | bit) : (index & ~bit);
  }
  return index;
}

inline void apply_gate(StateVector& sv, const Gate& g) {
  auto& amps = sv.amplitudes();
  const unsigned q = sv.qubit_count();
  const u64 cmask = mask_of(g.controls);
  switch (g.kind) {
    case GateKind::hadamard: {
      const u64 bit = u64{1} << g.targets[0];
      const double h = std::numbers::sqrt2 / 2.0;
      for_each_fixed(q, bit, 0, [&](u64 i) {
        const Complex a = amps[i], b = amps[i | bit];
        amps[i] = h * (a + b);
        amps[i | bit] = h * (a - b);
      });
      break;
    }
    case GateKind::pauli_x: {
      const u64 bit = u64{1} << g.targets[0];
      for_each_fixed(q, cmask | bit, cmask, [&](u64 i) { std::swap(amps[i], amps[i | bit]); });
      break;
    }
    case GateKind::controlled_phase: {
      const u64 bit = u64{1} << g.targets[0];
      const Complex phase = std::polar(1.0, g.angle);
      for_each_fixed(q, cmask | bit, cmask | bit, [&](u64 i) { amps[i] *= phase; });
      break;
    }
    case GateKind::swap: {
      const u64 a = u64{1} << g.targets[0], b = u64{1} << g.targets[1];
      for_each_fixed(q, cmask | a | b, cmask | a,
                     [&](u64 i) { std::swap(amps[i], amps[i ^ a ^ b]); });
      break;
    }
    case GateKind::controlled_permutation: {
      const auto& table = *g.table;
      std::vector<Complex> out = amps;
      // Contiguous target registers (the QPE work register) avoid the
      // per-bit gather.
      bool contiguous = true;
      for (std::size_t i = 1; i < g.targets.size(); ++i)
        contiguous = contiguous && g.targets[i] == g.targets[0] + i;
      const unsigned shift = g.targets[0];
      const u64 reg = ((u64{1} << g.targets.size()) - 1) << shift;
      for_each_fixed(q, cmask, cmask, [&](u64 i) {
        u64 dst;
        if (contiguous) {
          const u64 x = (i & reg) >> shift;
          dst = (i & ~reg) | (static_cast<u64>(table(static_cast<std::uint32_t>(x))) << shift);
        } else {
          const u64 x = extract_bits(i, g.targets);
          dst = deposit_bits(i, g.targets, table(static_cast<std::uint32_t>(x)));
        }
        out[dst] = amps[i];
      });
      amps.swap(out);
      break;
    }
    case GateKind::measure:
      break;
  }
}

}  // namespace detail

/// Applies every gate in order to |initial>. Measurements are markers only;
/// use measurement_distribution / sample on the result.
inline StateVector execute(const Circuit& circuit, u64 initial = 0) {
  StateVector sv(circuit.qubit_count(), initial);
  for (const Gate& g : circuit.gates()) detail::apply_gate(sv, g);
  return sv;
}

/// Runs a circuit made only of basis-permuting gates on one basis state.
inline u64 execute_basis(const Circuit& circuit, u64 input) {
  detail::require(circuit.qubit_count() <= 64, ErrorKind::capacity,
                  "basis simulation is limited to 64 qubits");
  u64 state = input;
  for (const Gate& g : circuit.gates()) {
    detail::require(g.is_classical(), ErrorKind::invalid_circuit,
                    std::string("gate '") + to_string(g.kind) + "' is not a basis permutation");
    const u64 cmask = detail::mask_of(g.controls);
    if ((state & cmask) != cmask) continue;
    switch (g.kind) {
      case GateKind::pauli_x:
        state ^= u64{1} << g.targets[0];
        break;
      case GateKind::swap: {
        const u64 a = (state >> g.targets[0]) & 1, b = (state >> g.targets[1]) & 1;
        if (a != b) state ^= (u64{1} << g.targets[0]) | (u64{1} << g.targets[1]);
        break;
      }
      case GateKind::controlled_permutation: {
        const u64 x = detail::extract_bits(state, g.targets);
        state = detail::deposit_bits(state, g.targets,
                                     (*g.table)(static_cast<std::uint32_t>(x)));
        break;
      }
      default:
        break;
    }
  }
  return state;
}

/// Marginal distribution of the measured outcome, using the circuit's
/// measurement map (classical bit i <- mapped qubit).
inline std::vector<double> measurement_distribution(const Circuit& circuit,
                                                    const StateVector& sv) {
  const auto& map = circuit.measurement_map();
  detail::require(!map.empty(), ErrorKind::invalid_circuit, "circuit has no measurements");
  detail::require(sv.qubit_count() == circuit.qubit_count(), ErrorKind::invalid_circuit,
                  "state and circuit widths differ");
  std::vector<double> p(std::size_t{1} << map.size(), 0.0);
  bool low_bits = true;
  for (const auto& [qubit, bit] : map) low_bits = low_bits && qubit == bit;
  const auto& amps = sv.amplitudes();
  const u64 low_mask = p.size() - 1;
  for (std::size_t i = 0; i < amps.size(); ++i) {
    u64 y = 0;
    if (low_bits) {
      y = i & low_mask;
    } else {
      for (const auto& [qubit, bit] : map) y |= ((i >> qubit) & 1) << bit;
    }
    p[y] += std::norm(amps[i]);
  }
  return p;
}

/// Marginal over qubits [0, t); the remaining qubits are traced out.
inline std::vector<double> low_qubit_marginal(const StateVector& sv, unsigned t) {
  detail::require(t >= 1 && t <= sv.qubit_count(), ErrorKind::invalid_argument,
                  "phase register wider than the state");
  std::vector<double> p(std::size_t{1} << t, 0.0);
  const u64 mask = p.size() - 1;
  const auto& amps = sv.amplitudes();
  for (std::size_t i = 0; i < amps.size(); ++i) p[i & mask] += std::norm(amps[i]);
  return p;
}

struct Histogram {
  unsigned phase_bits = 0;
  std::vector<u64> counts;  // length L = 2^phase_bits
  u64 shots = 0;

  Histogram() = default;
  explicit Histogram(unsigned t) : phase_bits(t), counts(std::size_t{1} << t, 0) {}

  u64 grid() const { return counts.size(); }

  void add(u64 y, u64 count = 1) {
    detail::require(y < counts.size(), ErrorKind::invalid_argument,
                    "outcome " + std::to_string(y) + " outside the grid");
    counts[y] += count;
    shots += count;
  }
};

/// Draws `shots` outcomes from `p` by inverse-CDF lookup on uniform01.
inline Histogram sample_distribution(const std::vector<double>& p, u64 shots, Rng& rng) {
  detail::require(shots >= 1, ErrorKind::invalid_argument, "shots must be >= 1");
  detail::require(!p.empty() && (p.size() & (p.size() - 1)) == 0, ErrorKind::invalid_argument,
                  "distribution length must be a power of two");
  unsigned t = 0;
  while ((std::size_t{1} << t) < p.size()) ++t;
  std::vector<double> cdf(p.size());
  double acc = 0.0;
  std::size_t last_nonzero = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    detail::require(p[i] >= 0.0 && std::isfinite(p[i]), ErrorKind::invalid_argument,
                    "distribution has a negative or non-finite entry");
    acc += p[i];
    cdf[i] = acc;
    if (p[i] > 0.0) last_nonzero = i;
  }
  detail::require(acc > 0.0, ErrorKind::invalid_argument, "distribution has zero mass");
  Histogram h(t);
  for (u64 s = 0; s < shots; ++s) {
    const double u = uniform01(rng) * acc;
    auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    std::size_t y = static_cast<std::size_t>(it - cdf.begin());
    if (y > last_nonzero) y = last_nonzero;
    h.add(y);
  }
  return h;
}

/// Samples the phase register (qubits [0, t)) of `state`.
inline Histogram sample(const StateVector& state, unsigned t, u64 shots, u64 seed) {
  Rng rng = make_rng(seed);
  return sample_distribution(low_qubit_marginal(state, t), shots, rng);
}

/// Closed-form outcome distribution of noiseless order-finding QPE: an
/// equal mixture over s of squared Dirichlet kernels centred at L*s/r.
inline std::vector<double> ideal_qpe_distribution(u64 order, unsigned t) {
  detail::require(order >= 1 && t >= 1 && t <= 30, ErrorKind::invalid_argument,
                  "ideal_qpe_distribution: need r >= 1 and 1 <= t <= 30");
  const u64 grid = u64{1} << t;
  const u64 period = order * grid;  // delta_s * r * L is an integer mod r*L
  const double inv_l2 = 1.0 / (static_cast<double>(grid) * static_cast<double>(grid));
  std::vector<double> p(grid, 0.0);
  for (u64 y = 0; y < grid; ++y) {
    double sum = 0.0;
    for (u64 s = 0; s < order; ++s) {
      // m = s*L - y*r, reduced into [0, rL)
      const u64 m = (s * grid + period - (y * order) % period) % period;
      if (m == 0) {
        sum += 1.0;
        continue;
      }
      if (m % order == 0) continue;
      const double num = std::sin(std::numbers::pi * static_cast<double>(m % order) /
                                  static_cast<double>(order));
      const double den = std::sin(std::numbers::pi * static_cast<double>(m) /
                                  static_cast<double>(period));
      sum += num * num / (den * den) * inv_l2;
    }
    p[y] = sum / static_cast<double>(order);
  }
  return p;
}

inline double total_variation(const std::vector<double>& p, const std::vector<double>& q) {
  detail::require(p.size() == q.size(), ErrorKind::invalid_argument,
                  "total_variation: length mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) s += std::abs(p[i] - q[i]);
  return 0.5 * s;
}

}  // namespace shorcert
