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

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "parityq/circuit.hpp"
#include "parityq/errors.hpp"
#include "parityq/gf2.hpp"
#include "parityq/pauli.hpp"

namespace parityq {

enum class CorrectionMode { Physical, Frame };

/// Pending Pauli corrections that have been recorded instead of applied.
/// The true state is frame * raw state; measurement outcomes read from the
/// raw state are sign-adjusted by the frame's commutation with the measured
/// operator.
class PauliFrame {
 public:
  PauliFrame() = default;
  explicit PauliFrame(size_t n) : x_(n), z_(n) {}

  size_t num_qubits() const { return x_.size(); }
  bool empty() const { return !x_.any() && !z_.any(); }
  bool x_bit(uint32_t q) const { return x_.get(q); }
  bool z_bit(uint32_t q) const { return z_.get(q); }

  void record(const PauliString& p) {
    if (p.num_qubits() != num_qubits()) throw InvalidArgument("frame length mismatch");
    x_ ^= p.x;
    z_ ^= p.z;
  }

  void clear_x(uint32_t q) { x_.set(q, false); }
  void clear_z(uint32_t q) { z_.set(q, false); }

  /// True when a measurement of p on the raw state reads the opposite of
  /// the true outcome.
  bool flips_outcome(const PauliString& p) const {
    if (p.num_qubits() != num_qubits()) throw InvalidArgument("frame length mismatch");
    return x_.overlap_parity(p.z) ^ z_.overlap_parity(p.x);
  }

  /// Pushes the frame through an applied Clifford gate (frame := G F G-dag,
  /// signs dropped). Keeps "true = frame * raw" valid when gates are applied
  /// to the raw state.
  void conjugate_through(const GateRecord& g) {
    switch (g.kind) {
      case GateKind::CNOT:
        x_.set(g.q1, x_.get(g.q1) ^ x_.get(g.q0));
        z_.set(g.q0, z_.get(g.q0) ^ z_.get(g.q1));
        return;
      case GateKind::H: {
        bool xq = x_.get(g.q0), zq = z_.get(g.q0);
        x_.set(g.q0, zq);
        z_.set(g.q0, xq);
        return;
      }
      case GateKind::S:
        z_.set(g.q0, z_.get(g.q0) ^ x_.get(g.q0));
        return;
      case GateKind::X:
      case GateKind::Z:
        return;
      case GateKind::RZ:
        if (x_.get(g.q0)) {
          throw ProtocolViolation(
              "cannot push an X frame through a rotation; flush the frame first");
        }
        return;
      default:
        throw InvalidArgument("cannot push a frame through a measurement");
    }
  }

  void append_qubit() {
    x_.push_back(false);
    z_.push_back(false);
  }

  void erase_qubit(uint32_t q) {
    x_.erase(q);
    z_.erase(q);
  }

  PauliString as_pauli() const {
    PauliString p(num_qubits());
    p.x = x_;
    p.z = z_;
    return p;
  }

 private:
  BitVector x_, z_;
};

/// Source of measurement outcomes: fresh seeded randomness, or a recorded
/// outcome script for bit-exact replay. Scripted sources force every
/// measurement (deterministic ones included, which checks replay
/// consistency) and reject over- or under-consumption.
class OutcomeSource {
 public:
  explicit OutcomeSource(uint64_t seed) : rng_(seed) {}

  static OutcomeSource scripted(std::vector<int> outcomes) {
    OutcomeSource src(0);
    src.script_ = std::move(outcomes);
    return src;
  }

  bool scripted() const { return script_.has_value(); }

  std::optional<int> next_forced() {
    if (!script_.has_value()) return std::nullopt;
    if (cursor_ >= script_->size()) {
      throw ProtocolViolation("outcome script exhausted; replay diverged");
    }
    return (*script_)[cursor_++];
  }

  void finish() const {
    if (script_.has_value() && cursor_ != script_->size()) {
      throw ProtocolViolation("outcome script not fully consumed; replay diverged");
    }
  }

  std::mt19937_64& rng() { return rng_; }

 private:
  std::mt19937_64 rng_;
  std::optional<std::vector<int>> script_;
  size_t cursor_ = 0;
};

/// Builds a backend state from a circuit's wire initializations (|0>/|+>
/// wires only).
template <class State>
State state_from_inits(const Circuit& c) {
  State st(0);
  for (const WireInit& w : c.inits) st.append_qubit(w);
  return st;
}

/// Measures p on the raw state, returning the frame-adjusted (true) outcome.
/// A forced value is interpreted in the true convention.
template <class State>
MeasureResult measure_framed(State& st, const PauliFrame& frame, const PauliString& p,
                             std::optional<int> forced_true, std::mt19937_64& rng) {
  bool flip = frame.flips_outcome(p);
  std::optional<int> forced_raw;
  if (forced_true.has_value()) forced_raw = flip ? -*forced_true : *forced_true;
  MeasureResult raw = st.measure_pauli(p, forced_raw, rng);
  return {flip ? -raw.outcome : raw.outcome, raw.deterministic};
}

/// Runs a circuit's gates and measurements on a backend state (no frame),
/// returning one result per measurement instruction.
template <class State>
std::vector<MeasureResult> run_circuit(State& st, const Circuit& c, OutcomeSource& src) {
  if (st.num_qubits() != c.num_qubits) throw InvalidArgument("circuit width mismatch");
  std::vector<MeasureResult> out;
  for (const GateRecord& g : c.gates) {
    switch (g.kind) {
      case GateKind::MX:
        out.push_back(st.measure_pauli(PauliString::single(c.num_qubits, g.q0, 'X'),
                                       src.next_forced(), src.rng()));
        break;
      case GateKind::MZ:
        out.push_back(st.measure_pauli(PauliString::single(c.num_qubits, g.q0, 'Z'),
                                       src.next_forced(), src.rng()));
        break;
      case GateKind::MPP:
        out.push_back(st.measure_pauli(*g.pauli, src.next_forced(), src.rng()));
        break;
      default:
        st.apply_gate(g);
        break;
    }
  }
  return out;
}

}  // namespace parityq
