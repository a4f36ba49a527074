#pragma once

// Modular multiplication backends for the order-finding oracle.
//
//  * Permutation backend: the dense table x -> a*x mod N (x < N), identity
//    for x >= N. The simulator applies it as an index remap.
//  * Gate-level backend: Cuccaro ripple-carry adders, a comparator-based
//    modular adder that subtracts N through the two's-complement constant
//    2^n - N, and an in-place controlled multiplier built by shift-and-add.
//    Modulus-derived constants are baked into the X-gate patterns that load
//    them, so the circuit structure depends only on the width n.

#include <cstdint>
#include <memory>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "shorcert/circuit.hpp"
#include "shorcert/error.hpp"
#include "shorcert/numtheory.hpp"
#include "shorcert/permutation.hpp"

namespace shorcert {

inline void check_width(u64 modulus, unsigned width) {
  detail::require(modulus >= 2, ErrorKind::invalid_argument, "modulus must be >= 2");
  detail::require(width >= 1 && width <= 30 && modulus <= (u64{1} << width),
                  ErrorKind::capacity,
                  "work register of " + std::to_string(width) +
                      " qubits cannot hold modulus " + std::to_string(modulus));
}

inline PermutationTable mod_mult_permutation(u64 multiplier, u64 modulus, unsigned width) {
  check_width(modulus, width);
  multiplier %= modulus;
  detail::require(gcd(multiplier, modulus) == 1, ErrorKind::not_coprime,
                  "multiplier " + std::to_string(multiplier) +
                      " is not coprime to " + std::to_string(modulus));
  std::vector<std::uint32_t> mapping(std::size_t{1} << width);
  for (std::uint32_t x = 0; x < mapping.size(); ++x)
    mapping[x] = x < modulus ? static_cast<std::uint32_t>(mul_mod(multiplier, x, modulus)) : x;
  return PermutationTable(width, std::move(mapping), multiplier, modulus);
}

/// Table for U^(2^k): the multiplier a^(2^k) mod N is precomputed
/// classically rather than composing k tables.
inline PermutationTable controlled_power_table(u64 base, u64 modulus, unsigned k,
                                               unsigned width) {
  check_width(modulus, width);
  return mod_mult_permutation(mod_pow2k(base, k, modulus), modulus, width);
}

struct ModularArithmeticPlan {
  unsigned width = 0;         // n
  u64 modulus = 0;            // N
  u64 nbar = 0;               // 2^n - N
  u64 multiplier = 0;         // c
  std::vector<u64> addends;   // c * 2^i mod N
  std::vector<u64> unaddends; // -c^{-1} * 2^i mod N, clears the accumulator
};

inline ModularArithmeticPlan make_plan(u64 multiplier, u64 modulus, unsigned width) {
  check_width(modulus, width);
  multiplier %= modulus;
  detail::require(gcd(multiplier, modulus) == 1, ErrorKind::not_coprime,
                  "multiplier is not coprime to the modulus");
  ModularArithmeticPlan plan;
  plan.width = width;
  plan.modulus = modulus;
  plan.nbar = (u64{1} << width) - modulus;
  plan.multiplier = multiplier;
  const u64 inverse = modular_inverse(multiplier, modulus);
  for (unsigned i = 0; i < width; ++i) {
    const u64 pow2 = (u64{1} << i) % modulus;
    plan.addends.push_back(mul_mod(multiplier, pow2, modulus));
    plan.unaddends.push_back((modulus - mul_mod(inverse, pow2, modulus)) % modulus);
  }
  return plan;
}

namespace detail {

// Cuccaro MAJ / UMA blocks.
inline void maj(Circuit& c, Qubit carry, Qubit b, Qubit a) {
  c.cx(a, b);
  c.cx(a, carry);
  c.ccx(carry, b, a);
}

inline void uma(Circuit& c, Qubit carry, Qubit b, Qubit a) {
  c.ccx(carry, b, a);
  c.cx(a, carry);
  c.cx(carry, b);
}

/// b += a over a.size() bits; the carry-out is XORed into carry_out when
/// given, otherwise dropped. carry_in must be |0> and is restored.
inline void cuccaro_add(Circuit& c, std::span<const Qubit> a, std::span<const Qubit> b,
                        Qubit carry_in, std::optional<Qubit> carry_out) {
  const std::size_t n = a.size();
  require(n >= 1 && b.size() == n, ErrorKind::invalid_argument,
          "adder registers must have equal nonzero width");
  maj(c, carry_in, b[0], a[0]);
  for (std::size_t i = 1; i < n; ++i) maj(c, a[i - 1], b[i], a[i]);
  if (carry_out) c.cx(a[n - 1], *carry_out);
  for (std::size_t i = n - 1; i >= 1; --i) uma(c, a[i - 1], b[i], a[i]);
  uma(c, carry_in, b[0], a[0]);
}

/// Appends the inverse of what `emit` appends (all gates are self-inverse
/// X-class gates, so this is the reversed sequence).
template <typename Emit>
void append_inverse(Circuit& c, Emit&& emit) {
  Circuit scratch(c.qubit_count());
  emit(scratch);
  Circuit inv = scratch.adjoint();
  std::vector<Qubit> identity(c.qubit_count());
  std::iota(identity.begin(), identity.end(), Qubit{0});
  c.append(inv, identity);
}

/// XOR a classical constant into `reg`, controlled on `controls`.
inline void load_constant(Circuit& c, u64 value, std::span<const Qubit> reg,
                          std::span<const Qubit> controls) {
  for (std::size_t j = 0; j < reg.size(); ++j)
    if ((value >> j) & 1)
      c.x(reg[j], std::vector<Qubit>(controls.begin(), controls.end()));
}

}  // namespace detail

/// Qubit assignment shared by the gate-level multiplier pieces.
struct MultiplierWiring {
  Qubit control = 0;
  std::vector<Qubit> x;         // n, the in-place work register
  std::vector<Qubit> acc;       // n + 1
  std::vector<Qubit> constant;  // n + 1
  Qubit carry = 0;
  Qubit flag = 0;               // modular-reduction flag
  Qubit range = 0;              // x < N comparator flag

  static unsigned ancilla_count(unsigned width) { return 2 * (width + 1) + 3; }

  /// Ancillas packed contiguously starting at `first`.
  static MultiplierWiring make(Qubit control, std::vector<Qubit> x, Qubit first) {
    MultiplierWiring w;
    const unsigned n = static_cast<unsigned>(x.size());
    w.control = control;
    w.x = std::move(x);
    Qubit next = first;
    for (unsigned i = 0; i <= n; ++i) w.acc.push_back(next++);
    for (unsigned i = 0; i <= n; ++i) w.constant.push_back(next++);
    w.carry = next++;
    w.flag = next++;
    w.range = next++;
    return w;
  }

  std::vector<Qubit> ancillas() const {
    std::vector<Qubit> out = acc;
    out.insert(out.end(), constant.begin(), constant.end());
    out.push_back(carry);
    out.push_back(flag);
    out.push_back(range);
    return out;
  }
};

/// acc <- (acc + k) mod N under `controls`, for acc < N and k < N.
/// Ancillas (constant register, carry, flag) start and end at |0>.
inline void append_modular_add(Circuit& c, const ModularArithmeticPlan& plan, u64 addend,
                               const MultiplierWiring& w, std::span<const Qubit> controls) {
  using detail::cuccaro_add;
  using detail::load_constant;
  const unsigned n = plan.width;
  const std::span<const Qubit> acc(w.acc);
  const std::span<const Qubit> konst(w.constant);
  const Qubit msb = w.acc[n];
  const Qubit flag_ctl[] = {w.flag};

  auto add_const = [&](Circuit& dst, u64 value, std::span<const Qubit> ctl) {
    load_constant(dst, value, konst, ctl);
    cuccaro_add(dst, konst, acc, w.carry, std::nullopt);
    load_constant(dst, value, konst, ctl);
  };
  auto sub_const = [&](Circuit& dst, u64 value, std::span<const Qubit> ctl) {
    detail::append_inverse(dst, [&](Circuit& s) { add_const(s, value, ctl); });
  };

  add_const(c, addend, controls);
  // acc - N as acc + (2^n + nbar) mod 2^{n+1}; the sign bit lands in msb.
  add_const(c, (u64{1} << n) + plan.nbar, {});
  c.cx(msb, w.flag);
  add_const(c, plan.modulus, flag_ctl);
  // Uncompute the flag: acc - k is negative exactly when no reduction
  // happened.
  sub_const(c, addend, controls);
  c.x(msb);
  c.cx(msb, w.flag);
  c.x(msb);
  add_const(c, addend, controls);
}

namespace detail {

/// range <- range XOR (x < N), through acc = x + nbar and its carry bit.
inline void toggle_range_flag(Circuit& c, const ModularArithmeticPlan& plan,
                              const MultiplierWiring& w) {
  const unsigned n = plan.width;
  const std::span<const Qubit> acc(w.acc);
  const std::span<const Qubit> konst(w.constant);
  auto compute = [&](Circuit& dst) {
    for (unsigned i = 0; i < n; ++i) dst.cx(w.x[i], w.acc[i]);
    load_constant(dst, plan.nbar, konst, {});
    cuccaro_add(dst, konst, acc, w.carry, std::nullopt);
    load_constant(dst, plan.nbar, konst, {});
  };
  compute(c);
  c.x(w.acc[n]);
  c.cx(w.acc[n], w.range);
  c.x(w.acc[n]);
  append_inverse(c, compute);
}

}  // namespace detail

/// In-place controlled x <- c*x mod N on x < N, identity on x >= N.
inline void append_controlled_multiplier(Circuit& c, const ModularArithmeticPlan& plan,
                                         const MultiplierWiring& w) {
  const unsigned n = plan.width;
  detail::require(w.x.size() == n && w.acc.size() == n + 1 && w.constant.size() == n + 1,
                  ErrorKind::invalid_argument, "multiplier wiring does not match width");
  detail::toggle_range_flag(c, plan, w);
  for (unsigned i = 0; i < n; ++i) {
    const Qubit ctl[] = {w.control, w.range, w.x[i]};
    append_modular_add(c, plan, plan.addends[i], w, ctl);
  }
  for (unsigned i = 0; i < n; ++i) c.swap(w.x[i], w.acc[i], {w.control, w.range});
  for (unsigned i = 0; i < n; ++i) {
    const Qubit ctl[] = {w.control, w.range, w.x[i]};
    append_modular_add(c, plan, plan.unaddends[i], w, ctl);
  }
  detail::toggle_range_flag(c, plan, w);
}

/// Ripple-carry adder fragment on 2n + 2 qubits:
/// a = [0, n), b = [n, 2n] (bit n of b receives the carry-out), carry
/// ancilla = 2n + 1. Maps |a, b, 0> to |a, (a + b) mod 2^{n+1}, 0>.
struct AdderFragment {
  Circuit circuit{0u};
  std::vector<Qubit> a;
  std::vector<Qubit> b;
  Qubit carry = 0;
};

inline AdderFragment ripple_carry_adder(unsigned n) {
  detail::require(n >= 1 && 2 * n + 2 <= 64, ErrorKind::capacity,
                  "ripple_carry_adder: width must be in [1, 31]");
  AdderFragment f;
  f.circuit = Circuit(2 * n + 2);
  for (unsigned i = 0; i < n; ++i) f.a.push_back(i);
  for (unsigned i = 0; i <= n; ++i) f.b.push_back(n + i);
  f.carry = 2 * n + 1;
  detail::cuccaro_add(f.circuit, f.a, std::span<const Qubit>(f.b).first(n), f.carry, f.b[n]);
  return f;
}

/// Controlled modular multiplier fragment: qubit 0 is the control, x is
/// [1, n], then the ancillas of MultiplierWiring.
struct MultiplierFragment {
  Circuit circuit{0u};
  ModularArithmeticPlan plan;
  MultiplierWiring wiring;
};

inline MultiplierFragment modular_multiplier_circuit(u64 multiplier, u64 modulus, unsigned n) {
  MultiplierFragment f;
  f.plan = make_plan(multiplier, modulus, n);
  std::vector<Qubit> x;
  for (unsigned i = 0; i < n; ++i) x.push_back(1 + i);
  f.wiring = MultiplierWiring::make(0, std::move(x), 1 + n);
  f.circuit = Circuit(1 + n + MultiplierWiring::ancilla_count(n));
  append_controlled_multiplier(f.circuit, f.plan, f.wiring);
  return f;
}

}  // namespace shorcert
