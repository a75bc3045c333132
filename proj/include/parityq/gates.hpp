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
#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "parityq/circuit.hpp"
#include "parityq/code.hpp"
#include "parityq/deform.hpp"
#include "parityq/errors.hpp"
#include "parityq/statevector.hpp"

namespace parityq {

/// Two labelled code blocks sharing one register: control wires come first,
/// target wires follow at offset control.n. Joint logical indices follow the
/// same order (control logicals first).
struct BlockPair {
  ClassicalParityCode control;
  ClassicalParityCode target;

  BlockPair(ClassicalParityCode c, ClassicalParityCode t)
      : control(std::move(c)), target(std::move(t)) {
    if (!control.labels.has_value() || !target.labels.has_value()) {
      throw InvalidArgument("both blocks must carry labels");
    }
  }

  uint32_t target_offset() const { return control.n; }
  ClassicalParityCode joint() const { return disjoint_union(control, target); }
};

enum class PcnotLayout {
  Auto,         // transversal when copy count matches target weight, else single
  Transversal,  // one control copy per target-support qubit
  Single,       // one control copy fanning out (not fault-tolerant)
};

/// A built parity-controlled-NOT: the physical circuit plus its wiring
/// metadata. transversal=false marks the fan-out form the fault checks
/// reject.
struct PcnotBuild {
  Circuit circuit;  // over the joint register
  bool transversal = false;
  std::vector<uint32_t> control_qubits;  // copies used, control-block indices
  std::vector<uint32_t> target_qubits;   // joint register indices
};

/// Emits the CNOTs implementing a target-logical flip conditioned on the
/// control label's parity. Copies are the control-block qubits carrying
/// exactly control_label; their count must be 1 or the target support
/// weight.
inline PcnotBuild pcnot_circuit(const BlockPair& blocks, const ParityLabel& control_label,
                                uint32_t target_logical,
                                PcnotLayout layout = PcnotLayout::Auto) {
  if (target_logical >= blocks.target.k) {
    throw InvalidArgument("target logical out of range");
  }
  std::vector<uint32_t> copies;
  const auto& clabels = *blocks.control.labels;
  for (uint32_t q = 0; q < blocks.control.n; ++q) {
    if (clabels[q] == control_label) copies.push_back(q);
  }
  if (copies.empty()) throw InvalidArgument("no control qubit carries the control label");
  std::vector<uint32_t> support = logical_x_support(*blocks.target.labels, target_logical);
  size_t c = copies.size(), d = support.size();

  bool transversal;
  switch (layout) {
    case PcnotLayout::Transversal:
      if (c != d) {
        throw InvalidArgument("transversal form needs one control copy per target qubit");
      }
      transversal = true;
      break;
    case PcnotLayout::Single:
      transversal = false;
      break;
    default:
      if (c == d) {
        transversal = true;
      } else if (c == 1) {
        transversal = false;
      } else {
        throw InvalidArgument("control copy count must be 1 or the target support weight");
      }
      break;
  }

  PcnotBuild out;
  out.circuit = Circuit(blocks.control.n + blocks.target.n);
  out.transversal = transversal;
  out.target_qubits.reserve(d);
  for (uint32_t t : support) out.target_qubits.push_back(blocks.target_offset() + t);
  if (transversal) {
    out.control_qubits = copies;
    for (size_t j = 0; j < d; ++j) {
      out.circuit.append(GateRecord::cnot(copies[j], out.target_qubits[j]));
    }
  } else {
    out.control_qubits = {copies[0]};
    for (uint32_t t : out.target_qubits) {
      out.circuit.append(GateRecord::cnot(copies[0], t));
    }
  }
  return out;
}

/// Dense logical reference: flips logical `target` exactly when the parity
/// of the logicals in control_label is odd. A target inside its own control
/// label has no defined semantics and is rejected.
inline Eigen::MatrixXcd pcnot_reference_unitary(const ParityLabel& control_label,
                                                uint32_t target, uint32_t k_total) {
  if (k_total > 12) throw GuardExceeded("reference unitary limited to 12 logicals");
  if (target >= k_total) throw InvalidArgument("target logical out of range");
  if (control_label.contains(target)) {
    throw InvalidArgument("target inside its own control label is undefined");
  }
  uint64_t mask = 0;
  for (uint32_t i : control_label.indices()) {
    if (i >= k_total) throw InvalidArgument("control label index out of range");
    mask |= uint64_t{1} << i;
  }
  size_t dim = size_t{1} << k_total;
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  for (uint64_t b = 0; b < dim; ++b) {
    uint64_t flip = static_cast<uint64_t>(std::popcount(b & mask) & 1);
    m(b ^ (flip << target), b) = 1.0;
  }
  return m;
}

/// exp(-i alpha/2 * prod_{i in label} Z_i) on k logicals, as a diagonal
/// matrix over logical basis states.
inline Eigen::MatrixXcd diagonal_rotation_unitary(const ParityLabel& label, double alpha,
                                                  uint32_t k) {
  if (k > 12) throw GuardExceeded("reference unitary limited to 12 logicals");
  uint64_t mask = 0;
  for (uint32_t i : label.indices()) {
    if (i >= k) throw InvalidArgument("label index out of range");
    mask |= uint64_t{1} << i;
  }
  size_t dim = size_t{1} << k;
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  for (uint64_t b = 0; b < dim; ++b) {
    double eigen = (std::popcount(b & mask) & 1) ? -1.0 : 1.0;
    m(b, b) = std::polar(1.0, -alpha / 2 * eigen);
  }
  return m;
}

enum class DiagonalKind { S, T };

/// One-bit gate teleportation of S or T onto a code qubit: resource wire in
/// P|+>, CNOT from the data qubit, Z-measurement, conditional correction
/// (Z for S-kind, S for T-kind), resource discarded. Logical effect is a
/// pi/2 (S) or pi/4 (T) rotation about the product of the qubit's label Zs.
template <class State>
MeasureResult teleport_diagonal(ProtocolRun<State>& run, uint32_t data_qubit,
                                DiagonalKind kind) {
  if (data_qubit >= run.code().n) throw InvalidArgument("data qubit out of range");
  constexpr double quarter_pi = 0.78539816339744831;
  uint32_t res = run.append_ancilla(WireInit::plus());
  if (kind == DiagonalKind::S) {
    run.apply_gate(GateRecord::s(res));
  } else {
    run.apply_gate(GateRecord::rz(quarter_pi, res));
  }
  run.apply_gate(GateRecord::cnot(data_qubit, res));
  MeasureResult r = run.measure(PauliString::single(run.width(), res, 'Z'), "teleport");
  if (r.outcome == -1) {
    if (kind == DiagonalKind::S) {
      run.apply_correction(PauliString::single(run.width(), data_qubit, 'Z'), "teleport");
    } else {
      run.apply_gate(GateRecord::s(data_qubit));
    }
  }
  run.discard_ancilla(res, 'Z', r.outcome);
  return r;
}

enum class RotationFinalize {
  RemoveCopy,  // remove the copy directly, connecting stabilizer consumed
  KeepCopy,    // reactivate the connecting stabilizer, copy stays in the code
};

struct RotationOptions {
  /// Syndrome sweeps after adding the copy, connecting stabilizer included.
  uint32_t syndrome_rounds = 1;
  /// Leave false only to demonstrate the protocol-order violation.
  bool exclude_connecting = true;
  RotationFinalize finalize = RotationFinalize::RemoveCopy;
  /// Optional single-wire replacement for the exact rotation: a 1-qubit
  /// unitary circuit applied to the copy, gate by gate.
  std::optional<Circuit> decomposition;
};

struct RotationOutcome {
  uint32_t copy = 0;
  DeformationStep added;
  std::optional<DeformationStep> removed;
};

/// The four-step many-body rotation: (1) add a copy of the label's qubit and
/// sweep syndromes, (2) exclude the connecting stabilizer, (3) rotate the
/// copy (sweeping active stabilizers after every gate), (4) remove the copy
/// or reactivate the stabilizer and keep it.
template <class State>
RotationOutcome rotation_protocol(ProtocolRun<State>& run, const ParityLabel& label,
                                  double alpha, const RotationOptions& opt = {}) {
  uint32_t source = UINT32_MAX;
  for (uint32_t q = 0; q < run.code().n; ++q) {
    if (run.labels()[q] == label) {
      source = q;
      break;
    }
  }
  if (source == UINT32_MAX) throw InvalidArgument("no code qubit carries the label");

  RotationOutcome out;
  out.added = run.add_parity_qubit({source}, label);
  out.copy = out.added.qubit;
  size_t connecting = run.code().stabilizers.size() - 1;
  for (uint32_t round = 0; round < opt.syndrome_rounds; ++round) run.syndrome_sweep();

  if (opt.exclude_connecting) run.exclude_stabilizer(connecting);

  run.flush_frame_x(out.copy);
  if (opt.decomposition.has_value()) {
    const Circuit& dec = *opt.decomposition;
    if (dec.num_qubits != 1) throw InvalidArgument("decomposition must be a 1-wire circuit");
    if (dec.has_measurements()) throw InvalidArgument("decomposition must be unitary");
    for (GateRecord g : dec.gates) {
      g.q0 = out.copy;
      run.apply_gate(g);
      run.syndrome_sweep();
    }
  } else if (alpha != 0.0) {
    // A zero angle needs no physical gate; the protocol degenerates to
    // add and remove.
    run.apply_gate(GateRecord::rz(alpha, out.copy));
    run.syndrome_sweep();
  }

  if (opt.finalize == RotationFinalize::RemoveCopy) {
    if (!run.stabilizer_excluded(connecting)) {
      throw ProtocolViolation("remove the copy only after excluding the connecting stabilizer");
    }
    out.removed = run.remove_parity_qubit(out.copy, connecting);
  } else if (opt.exclude_connecting) {
    run.reactivate_stabilizer(connecting);
  }
  run.syndrome_sweep();
  return out;
}

/// Logical action of an arbitrary measurement-based protocol, extracted by
/// recording one run and force-replaying its outcomes on every logical basis
/// column. Valid whenever the protocol's random outcomes have column-
/// independent probability 1/2 (true for all deformation and teleportation
/// measurements here); a column that cannot reproduce the script raises
/// ForcedOutcomeContradiction.
struct ProtocolActionReport {
  Eigen::MatrixXcd logical;
  double leakage = 0.0;
  bool block_preserving = false;
  ClassicalParityCode final_code;
  ProtocolTrace trace;
};

template <class Protocol>
ProtocolActionReport protocol_logical_action(const ClassicalParityCode& code,
                                             CorrectionMode mode, Protocol&& protocol,
                                             std::optional<std::vector<int>> script = std::nullopt,
                                             uint64_t record_seed = 1) {
  if (!code.labels.has_value()) throw InvalidArgument("code must carry labels");
  if (code.k > StateVector::kMaxQubits) throw GuardExceeded("logical dimension too large");
  ProtocolActionReport rep;
  std::vector<int> outcomes;
  {
    ProtocolRun<StateVector> rec(code, 0, mode,
                                 script.has_value() ? OutcomeSource::scripted(*script)
                                                    : OutcomeSource(record_seed));
    protocol(rec);
    if (script.has_value()) rec.finish();
    outcomes = rec.trace().outcomes();
    rep.final_code = rec.code();
    rep.trace = rec.trace();
  }
  if (rep.final_code.k != code.k) throw InvalidArgument("protocol changed the logical count");
  if (!rep.final_code.labels.has_value()) throw InvalidArgument("final code lost its labels");

  size_t dim = size_t{1} << code.k;
  rep.logical.resize(dim, dim);
  const auto& final_labels = *rep.final_code.labels;
  for (uint64_t b = 0; b < dim; ++b) {
    ProtocolRun<StateVector> run(code, b, mode, OutcomeSource::scripted(outcomes));
    protocol(run);
    run.finish();
    run.flush_frame();
    if (run.width() != rep.final_code.n) {
      throw InvalidArgument("protocol left ancilla wires behind");
    }
    double in_block = 0.0;
    for (uint64_t bp = 0; bp < dim; ++bp) {
      std::complex<double> e = run.state().amplitude(code_basis_index(final_labels, bp));
      rep.logical(bp, b) = e;
      in_block += std::norm(e);
    }
    // Out-of-block amplitude against the actual norm; norm rounding is not
    // leakage.
    double total = run.state().norm();
    rep.leakage = std::max(rep.leakage, std::sqrt(std::max(0.0, total * total - in_block)));
  }
  rep.block_preserving = rep.leakage <= 1e-9;
  return rep;
}

}  // namespace parityq
