// Copyright 2026 The parityq developers
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#include "parityq/circuit.hpp"
#include "parityq/code.hpp"
#include "parityq/errors.hpp"
#include "parityq/pauli.hpp"

namespace parityq {

/// Forward: C P C-dagger (how an error P before the circuit appears after
/// it). Inverse: C-dagger P C (which input operator produces P at the
/// output; the Heisenberg pullback used to read labels off encoders).
enum class ConjugationDirection { Forward, Inverse };

namespace detail {

inline void conjugate_gate(PauliString& p, const GateRecord& g, bool inverse) {
  switch (g.kind) {
    case GateKind::CNOT: {
      bool xc = p.x.get(g.q0), zc = p.z.get(g.q0);
      bool xt = p.x.get(g.q1), zt = p.z.get(g.q1);
      // Same rule both ways: the gate is self-inverse.
      if (xc && zt && (xt == zc)) p.negative = !p.negative;
      p.x.set(g.q1, xt ^ xc);
      p.z.set(g.q0, zc ^ zt);
      break;
    }
    case GateKind::H: {
      bool xq = p.x.get(g.q0), zq = p.z.get(g.q0);
      if (xq && zq) p.negative = !p.negative;
      p.x.set(g.q0, zq);
      p.z.set(g.q0, xq);
      break;
    }
    case GateKind::S: {
      bool xq = p.x.get(g.q0), zq = p.z.get(g.q0);
      if (!inverse) {
        // X -> Y, Y -> -X.
        if (xq && zq) p.negative = !p.negative;
      } else {
        // X -> -Y, Y -> X.
        if (xq && !zq) p.negative = !p.negative;
      }
      p.z.set(g.q0, zq ^ xq);
      break;
    }
    case GateKind::X:
      if (p.z.get(g.q0)) p.negative = !p.negative;
      break;
    case GateKind::Z:
      if (p.x.get(g.q0)) p.negative = !p.negative;
      break;
    default:
      throw InvalidArgument("conjugation requires a unitary Clifford circuit");
  }
}

}  // namespace detail

/// Conjugates a Pauli string through a Clifford circuit with exact sign
/// tracking. Rejects circuits containing RZ or measurements.
inline PauliString conjugate_pauli(const Circuit& c, PauliString p,
                                   ConjugationDirection dir) {
  if (p.num_qubits() != c.num_qubits) {
    throw InvalidArgument("pauli length must match circuit width");
  }
  if (dir == ConjugationDirection::Forward) {
    for (const auto& g : c.gates) detail::conjugate_gate(p, g, false);
  } else {
    for (auto it = c.gates.rbegin(); it != c.gates.rend(); ++it) {
      detail::conjugate_gate(p, *it, true);
    }
  }
  return p;
}

/// Reads the parity label of every wire off an encoding circuit: pull each
/// output Z back through the circuit; the logical-input wires it lands on
/// form the label.
///
/// Preconditions: every wire is initialized to |0> or a logical input
/// L0..L(k-1), each logical exactly once; the gates form a unitary Clifford
/// circuit mapping the computational basis to itself (CNOT networks qualify).
/// A pullback with X/Y support or a negative sign means the circuit is not a
/// classical parity encoder and is rejected.
inline LabelAssignment labels_from_encoding_circuit(const Circuit& c) {
  std::vector<uint32_t> logical_wire;
  for (uint32_t q = 0; q < c.num_qubits; ++q) {
    const WireInit& w = c.inits[q];
    if (w.kind == WireInit::Kind::Plus) {
      throw InvalidArgument("encoder wires must start as |0> or logical inputs");
    }
    if (w.kind == WireInit::Kind::Logical) {
      if (w.logical >= c.num_qubits) throw InvalidArgument("logical input index too large");
      logical_wire.resize(std::max<size_t>(logical_wire.size(), w.logical + 1), UINT32_MAX);
      if (logical_wire[w.logical] != UINT32_MAX) {
        throw InvalidArgument("duplicate logical input index");
      }
      logical_wire[w.logical] = q;
    }
  }
  uint32_t k = static_cast<uint32_t>(logical_wire.size());
  for (uint32_t i = 0; i < k; ++i) {
    if (logical_wire[i] == UINT32_MAX) {
      throw InvalidArgument("logical input indices must be contiguous from 0");
    }
  }
  if (!c.is_unitary_clifford()) {
    throw InvalidArgument("encoder must be a unitary Clifford circuit");
  }

  LabelAssignment out;
  out.labels.reserve(c.num_qubits);
  for (uint32_t q = 0; q < c.num_qubits; ++q) {
    PauliString back = conjugate_pauli(c, PauliString::single(c.num_qubits, q, 'Z'),
                                       ConjugationDirection::Inverse);
    if (back.x.any()) {
      throw InvalidArgument(
          "output Z pulls back with X support; not a classical parity encoder");
    }
    if (back.negative) {
      throw InvalidArgument(
          "output Z pulls back with a negative sign; not a classical parity encoder");
    }
    std::vector<uint32_t> idx;
    for (uint32_t w = 0; w < c.num_qubits; ++w) {
      if (back.z.get(w) && c.inits[w].kind == WireInit::Kind::Logical) {
        idx.push_back(c.inits[w].logical);
      }
    }
    out.labels.push_back(ParityLabel(std::move(idx)));
  }
  out.seeds = find_seeds(out.labels, k);
  return out;
}

/// Builds the standard encoder for a labelled code: seed wires carry the
/// logical inputs; every other qubit starts in |0> and receives one CNOT
/// from each seed in its label.
inline Circuit canonical_encoder(const ClassicalParityCode& code,
                                 const LabelAssignment& assignment) {
  if (!assignment.seeds.has_value()) {
    throw InvalidArgument("canonical encoder needs seed qubits for every logical");
  }
  if (assignment.labels.size() != code.n) {
    throw InvalidArgument("label list length must equal n");
  }
  const std::vector<uint32_t>& seeds = *assignment.seeds;
  Circuit c(code.n);
  std::vector<bool> is_seed(code.n, false);
  for (uint32_t i = 0; i < seeds.size(); ++i) {
    if (seeds[i] >= code.n) throw InvalidArgument("seed qubit out of range");
    if (assignment.labels[seeds[i]] != ParityLabel::singleton(i)) {
      throw InvalidArgument("seed qubit must carry the singleton label of its logical");
    }
    c.inits[seeds[i]] = WireInit::logical_input(i);
    is_seed[seeds[i]] = true;
  }
  for (uint32_t q = 0; q < code.n; ++q) {
    if (is_seed[q]) continue;
    for (uint32_t i : assignment.labels[q].indices()) {
      if (i >= seeds.size()) throw InvalidArgument("label references unknown logical");
      c.append(GateRecord::cnot(seeds[i], q));
    }
  }
  return c;
}

}  // namespace parityq
