#pragma once

// Gate-level circuit IR and the inverse QFT.
//
// Qubit q is bit q of a basis-state index (little-endian). A circuit's
// measurement map assigns classical bit i of the outcome to one qubit;
// outcome y has classical bit i in its 2^i place.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <memory>
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "shorcert/error.hpp"
#include "shorcert/permutation.hpp"

namespace shorcert {

using Qubit = std::uint32_t;

enum class GateKind {
  hadamard,
  pauli_x,
  controlled_phase,
  swap,
  controlled_permutation,
  measure,
};

inline const char* to_string(GateKind kind) {
  switch (kind) {
    case GateKind::hadamard: return "h";
    case GateKind::pauli_x: return "x";
    case GateKind::controlled_phase: return "cphase";
    case GateKind::swap: return "swap";
    case GateKind::controlled_permutation: return "cperm";
    case GateKind::measure: return "measure";
  }
  return "?";
}

struct Gate {
  GateKind kind = GateKind::hadamard;
  std::vector<Qubit> targets;
  std::vector<Qubit> controls;
  double angle = 0.0;  // controlled_phase only
  std::shared_ptr<const PermutationTable> table;  // controlled_permutation only

  /// True for gates that map basis states to basis states.
  bool is_classical() const {
    return kind == GateKind::pauli_x || kind == GateKind::swap ||
           kind == GateKind::controlled_permutation ||
           kind == GateKind::measure;
  }
};

struct RegisterLayout {
  unsigned phase = 0;
  unsigned work = 0;
  unsigned ancilla = 0;

  unsigned total() const { return phase + work + ancilla; }
  Qubit phase_qubit(unsigned k) const { return k; }
  Qubit work_qubit(unsigned i) const { return phase + i; }
  Qubit ancilla_qubit(unsigned i) const { return phase + work + i; }
};

class Circuit {
 public:
  explicit Circuit(unsigned qubit_count) : qubits_(qubit_count) {}
  explicit Circuit(RegisterLayout layout)
      : qubits_(layout.total()), layout_(layout) {}

  unsigned qubit_count() const noexcept { return qubits_; }
  const RegisterLayout& layout() const noexcept { return layout_; }
  const std::vector<Gate>& gates() const noexcept { return gates_; }
  std::size_t size() const noexcept { return gates_.size(); }

  /// (qubit, classical bit) pairs, in classical-bit order.
  const std::vector<std::pair<Qubit, unsigned>>& measurement_map() const noexcept {
    return measurements_;
  }
  unsigned measured_bits() const noexcept {
    return static_cast<unsigned>(measurements_.size());
  }

  void append(Gate gate) {
    validate(gate);
    if (gate.kind == GateKind::measure) {
      for (Qubit q : gate.targets) {
        for (const auto& [mq, bit] : measurements_)
          detail::require(mq != q, ErrorKind::invalid_circuit,
                          "qubit measured twice");
        measurements_.emplace_back(q, static_cast<unsigned>(measurements_.size()));
      }
    }
    gates_.push_back(std::move(gate));
  }

  void h(Qubit q) { append({GateKind::hadamard, {q}, {}, 0.0, nullptr}); }
  void x(Qubit q, std::vector<Qubit> controls = {}) {
    append({GateKind::pauli_x, {q}, std::move(controls), 0.0, nullptr});
  }
  void cx(Qubit control, Qubit target) { x(target, {control}); }
  void ccx(Qubit c0, Qubit c1, Qubit target) { x(target, {c0, c1}); }
  void cphase(Qubit control, Qubit target, double angle) {
    append({GateKind::controlled_phase, {target}, {control}, angle, nullptr});
  }
  void swap(Qubit a, Qubit b, std::vector<Qubit> controls = {}) {
    append({GateKind::swap, {a, b}, std::move(controls), 0.0, nullptr});
  }
  void permute(std::shared_ptr<const PermutationTable> table,
               std::vector<Qubit> targets, std::vector<Qubit> controls) {
    append({GateKind::controlled_permutation, std::move(targets),
            std::move(controls), 0.0, std::move(table)});
  }
  void measure(std::vector<Qubit> targets) {
    append({GateKind::measure, std::move(targets), {}, 0.0, nullptr});
  }

  /// Appends `fragment` with fragment qubit i placed on wiring[i]. Extra
  /// controls are added to every gate (measurements are not allowed then).
  void append(const Circuit& fragment, std::span<const Qubit> wiring,
              std::span<const Qubit> extra_controls = {}) {
    detail::require(wiring.size() == fragment.qubit_count(),
                    ErrorKind::invalid_circuit,
                    "fragment wiring size does not match fragment width");
    for (const Gate& g : fragment.gates_) {
      Gate mapped = g;
      for (auto& q : mapped.targets) q = wiring[q];
      for (auto& q : mapped.controls) q = wiring[q];
      if (!extra_controls.empty()) {
        detail::require(g.kind != GateKind::measure, ErrorKind::invalid_circuit,
                        "cannot control a measurement");
        mapped.controls.insert(mapped.controls.end(), extra_controls.begin(),
                               extra_controls.end());
      }
      append(std::move(mapped));
    }
  }

  /// Inverse circuit: gates reversed, phases negated, tables inverted.
  Circuit adjoint() const {
    Circuit out = *this;
    out.gates_.clear();
    out.measurements_.clear();
    for (auto it = gates_.rbegin(); it != gates_.rend(); ++it) {
      detail::require(it->kind != GateKind::measure, ErrorKind::invalid_circuit,
                      "adjoint of a measured circuit");
      Gate g = *it;
      if (g.kind == GateKind::controlled_phase) g.angle = -g.angle;
      if (g.kind == GateKind::controlled_permutation)
        g.table = std::make_shared<const PermutationTable>(g.table->inverse());
      out.gates_.push_back(std::move(g));
    }
    return out;
  }

  std::size_t count(GateKind kind) const {
    return static_cast<std::size_t>(std::count_if(
        gates_.begin(), gates_.end(), [kind](const Gate& g) { return g.kind == kind; }));
  }

 private:
  void validate(const Gate& g) const {
    using detail::require;
    require(!g.targets.empty(), ErrorKind::invalid_circuit, "gate has no targets");
    std::vector<Qubit> all = g.targets;
    all.insert(all.end(), g.controls.begin(), g.controls.end());
    for (Qubit q : all)
      require(q < qubits_, ErrorKind::invalid_circuit,
              "qubit index " + std::to_string(q) + " out of range for " +
                  std::to_string(qubits_) + " qubits");
    std::sort(all.begin(), all.end());
    require(std::adjacent_find(all.begin(), all.end()) == all.end(),
            ErrorKind::invalid_circuit, "gate qubits must be distinct");

    switch (g.kind) {
      case GateKind::hadamard:
        require(g.targets.size() == 1 && g.controls.empty(),
                ErrorKind::invalid_circuit, "hadamard takes one target");
        break;
      case GateKind::pauli_x:
        require(g.targets.size() == 1, ErrorKind::invalid_circuit,
                "x takes one target");
        break;
      case GateKind::controlled_phase:
        require(g.targets.size() == 1, ErrorKind::invalid_circuit,
                "phase takes one target");
        require(std::isfinite(g.angle), ErrorKind::invalid_circuit,
                "phase angle must be finite");
        break;
      case GateKind::swap:
        require(g.targets.size() == 2, ErrorKind::invalid_circuit,
                "swap takes two targets");
        break;
      case GateKind::controlled_permutation:
        require(g.table != nullptr, ErrorKind::invalid_circuit,
                "permutation gate without table");
        require(g.targets.size() == g.table->width(), ErrorKind::invalid_circuit,
                "permutation width does not match target register");
        break;
      case GateKind::measure:
        require(g.controls.empty(), ErrorKind::invalid_circuit,
                "measurement cannot be controlled");
        break;
    }
  }

  unsigned qubits_;
  RegisterLayout layout_{};
  std::vector<Gate> gates_;
  std::vector<std::pair<Qubit, unsigned>> measurements_;
};

/// Exact inverse QFT on t qubits: controlled-phase ladder followed by the
/// bit-reversal swap network. Maps (1/sqrt(L)) sum_x e^{2 pi i phi x}|x>
/// to |L phi> when L phi is an integer.
inline Circuit inverse_qft(unsigned t) {
  detail::require(t >= 1, ErrorKind::invalid_argument, "inverse_qft: t must be >= 1");
  Circuit c(t);
  for (unsigned j = 0; j < t; ++j) {
    const Qubit target = t - 1 - j;
    for (unsigned k = 0; k < j; ++k) {
      const Qubit control = t - 1 - k;
      c.cphase(control, target, -std::numbers::pi / static_cast<double>(1u << (j - k)));
    }
    c.h(target);
  }
  for (unsigned i = 0; i < t / 2; ++i) c.swap(i, t - 1 - i);
  return c;
}

inline nlohmann::json to_json(const Gate& g) {
  nlohmann::json j;
  j["kind"] = to_string(g.kind);
  j["targets"] = g.targets;
  if (!g.controls.empty()) j["controls"] = g.controls;
  if (g.kind == GateKind::controlled_phase) j["angle"] = g.angle;
  if (g.kind == GateKind::controlled_permutation) {
    j["table"] = {{"width", g.table->width()},
                  {"multiplier", g.table->multiplier()},
                  {"modulus", g.table->modulus()}};
  }
  return j;
}

inline nlohmann::json to_json(const Circuit& c) {
  nlohmann::json j;
  j["qubits"] = c.qubit_count();
  j["registers"] = {{"phase", c.layout().phase},
                    {"work", c.layout().work},
                    {"ancilla", c.layout().ancilla}};
  nlohmann::json mm = nlohmann::json::array();
  for (const auto& [q, bit] : c.measurement_map()) mm.push_back({{"qubit", q}, {"bit", bit}});
  j["measurement_map"] = std::move(mm);
  nlohmann::json gates = nlohmann::json::array();
  for (const auto& g : c.gates()) gates.push_back(to_json(g));
  j["gates"] = std::move(gates);
  return j;
}

}  // namespace shorcert
