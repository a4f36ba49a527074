#pragma once

// Parallel QPE scaffold for order finding.
//
// Layout: phase qubits [0, t), work qubits [t, t + n), then ancillas (gate
// backend only). Phase qubit k controls U^(2^k), the work register starts
// in |1>, and after the inverse QFT classical bit k of the outcome is
// phase qubit k.

#include <memory>
#include <string>
#include <vector>

#include "shorcert/arith.hpp"
#include "shorcert/circuit.hpp"
#include "shorcert/numtheory.hpp"

namespace shorcert {

enum class Backend { permutation, arithmetic };

inline const char* to_string(Backend b) {
  return b == Backend::permutation ? "perm" : "arith";
}

inline Backend parse_backend(const std::string& s) {
  if (s == "perm" || s == "permutation") return Backend::permutation;
  if (s == "arith" || s == "arithmetic") return Backend::arithmetic;
  detail::fail(ErrorKind::config, "unknown backend '" + s + "' (expected perm|arith)");
}

/// t = 2 * ceil(log2 N).
inline unsigned default_phase_bits(u64 modulus) { return 2 * ceil_log2(modulus); }

inline unsigned work_width(u64 modulus) { return ceil_log2(modulus); }

inline RegisterLayout qpe_layout(u64 modulus, unsigned t, Backend backend) {
  const unsigned n = work_width(modulus);
  return RegisterLayout{t, n,
                        backend == Backend::arithmetic ? MultiplierWiring::ancilla_count(n) : 0u};
}

inline Circuit build_qpe_circuit(const OrderFindingInstance& instance, unsigned t,
                                 Backend backend) {
  const u64 modulus = instance.modulus;
  const u64 base = instance.base;
  detail::require(t >= 1, ErrorKind::invalid_argument, "QPE needs at least one phase bit");
  detail::require(modulus >= 3 && base > 1 && base < modulus, ErrorKind::invalid_argument,
                  "QPE instance needs N >= 3 and 1 < a < N");
  detail::require(gcd(base, modulus) == 1, ErrorKind::not_coprime,
                  "QPE instance needs gcd(a, N) = 1");

  const RegisterLayout layout = qpe_layout(modulus, t, backend);
  const unsigned n = layout.work;
  check_width(modulus, n);
  Circuit c(layout);

  std::vector<Qubit> work;
  for (unsigned i = 0; i < n; ++i) work.push_back(layout.work_qubit(i));

  for (unsigned k = 0; k < t; ++k) c.h(layout.phase_qubit(k));
  c.x(layout.work_qubit(0));

  for (unsigned k = 0; k < t; ++k) {
    const u64 multiplier = mod_pow2k(base, k, modulus);
    if (backend == Backend::permutation) {
      auto table = std::make_shared<const PermutationTable>(
          mod_mult_permutation(multiplier, modulus, n));
      c.permute(std::move(table), work, {layout.phase_qubit(k)});
    } else {
      const auto plan = make_plan(multiplier, modulus, n);
      const auto wiring =
          MultiplierWiring::make(layout.phase_qubit(k), work, layout.ancilla_qubit(0));
      append_controlled_multiplier(c, plan, wiring);
    }
  }

  const Circuit iqft = inverse_qft(t);
  std::vector<Qubit> phase;
  for (unsigned k = 0; k < t; ++k) phase.push_back(layout.phase_qubit(k));
  c.append(iqft, phase);
  c.measure(phase);
  return c;
}

}  // namespace shorcert
