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
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "parityq/circuit.hpp"
#include "parityq/code.hpp"
#include "parityq/errors.hpp"
#include "parityq/frame.hpp"
#include "parityq/pauli.hpp"

namespace parityq {

/// One measurement-based code change: a parity qubit added to or removed
/// from the code. connecting_stabilizer is the measured (add) or consumed
/// (remove) stabilizer support, in the indexing current at measurement time.
struct DeformationStep {
  enum class Kind { Add, Remove };
  Kind kind = Kind::Add;
  uint32_t qubit = 0;
  ParityLabel label;
  std::vector<uint32_t> connecting_stabilizer;
  int outcome = 0;
  bool deterministic = false;
  PauliString correction;  // identity when the outcome needed none
  CorrectionMode mode = CorrectionMode::Physical;
};

/// One entry of a protocol's event log.
struct TraceEvent {
  enum class Kind { Deform, Gate, Measure, Correction, Exclude, Reactivate, Append, Discard };
  Kind kind = Kind::Gate;
  std::optional<DeformationStep> step;  // Deform
  std::optional<GateRecord> gate;       // Gate
  std::optional<PauliString> pauli;     // Measure operand / Correction pauli
  int outcome = 0;                      // Measure; Discard eigensign
  bool deterministic = false;           // Measure
  std::string context;                  // free-form annotation
  uint32_t index = 0;                   // Exclude/Reactivate stabilizer; Append/Discard wire
  CorrectionMode mode = CorrectionMode::Physical;  // Correction
};

/// Ordered protocol log. The outcome sequence alone replays the run
/// bit-for-bit through a scripted OutcomeSource.
struct ProtocolTrace {
  std::vector<TraceEvent> events;

  std::vector<int> outcomes() const {
    std::vector<int> out;
    for (const TraceEvent& e : events) {
      if (e.kind == TraceEvent::Kind::Deform) out.push_back(e.step->outcome);
      if (e.kind == TraceEvent::Kind::Measure) out.push_back(e.outcome);
    }
    return out;
  }
};

/// Replaces every non-linking stabilizer containing qubit by its symmetric
/// difference with the linking one. The result references qubit only in the
/// linking stabilizer; the span is unchanged.
inline std::vector<std::vector<uint32_t>> rebase_stabilizers(
    const std::vector<std::vector<uint32_t>>& stabilizers, uint32_t qubit,
    size_t linking) {
  if (linking >= stabilizers.size()) throw InvalidArgument("linking index out of range");
  const std::vector<uint32_t>& link = stabilizers[linking];
  if (!std::binary_search(link.begin(), link.end(), qubit)) {
    throw InvalidArgument("linking stabilizer does not contain the qubit");
  }
  std::vector<std::vector<uint32_t>> out = stabilizers;
  for (size_t s = 0; s < out.size(); ++s) {
    if (s == linking) continue;
    if (!std::binary_search(out[s].begin(), out[s].end(), qubit)) continue;
    std::vector<uint32_t> sym;
    std::set_symmetric_difference(out[s].begin(), out[s].end(), link.begin(), link.end(),
                                  std::back_inserter(sym));
    out[s] = std::move(sym);
  }
  return out;
}

struct SyndromeRecord {
  uint32_t stabilizer = 0;
  int outcome = 0;
  bool deterministic = false;
};

/// Drives one protocol instance: owns the backend state, the evolving code,
/// the Pauli frame, the stabilizer exclusion set, and the event trace.
/// Outcomes flow through one OutcomeSource, so a recorded trace replays
/// exactly when fed back as a script. Wires [0, code.n) are code qubits;
/// any wires above are protocol ancillas.
template <class State>
class ProtocolRun {
 public:
  ProtocolRun(ClassicalParityCode code, uint64_t logical_bits, CorrectionMode mode,
              OutcomeSource outcomes)
      : code_(std::move(code)),
        state_(0),
        frame_(0),
        mode_(mode),
        outcomes_(std::move(outcomes)) {
    if (!code_.labels.has_value()) throw InvalidArgument("code must carry labels");
    if (code_.k < 64 && (logical_bits >> code_.k)) {
      throw InvalidArgument("logical index out of range");
    }
    state_ = State(code_.n);
    frame_ = PauliFrame(code_.n);
    excluded_.assign(code_.stabilizers.size(), false);
    const auto& labels = *code_.labels;
    for (uint32_t q = 0; q < code_.n; ++q) {
      int parity = 0;
      for (uint32_t i : labels[q].indices()) {
        parity ^= static_cast<int>((logical_bits >> i) & 1);
      }
      if (parity) state_.apply_x(q);
    }
  }

  const ClassicalParityCode& code() const { return code_; }
  State& state() { return state_; }
  const State& state() const { return state_; }
  const PauliFrame& frame() const { return frame_; }
  CorrectionMode mode() const { return mode_; }
  const ProtocolTrace& trace() const { return trace_; }
  const std::vector<ParityLabel>& labels() const { return *code_.labels; }
  bool stabilizer_excluded(size_t index) const { return excluded_.at(index); }

  /// Current wire count (code qubits plus outstanding ancillas).
  uint32_t width() const { return state_.num_qubits(); }

  /// Appends a |+> qubit, measures the Z-stabilizer on partners plus the new
  /// qubit, and corrects (or frame-records) an X on the new qubit when the
  /// outcome is -1. The new qubit's label is the XOR of the partner labels;
  /// a declared label must match it.
  DeformationStep add_parity_qubit(const std::vector<uint32_t>& partners,
                                   std::optional<ParityLabel> declared = std::nullopt) {
    require_no_ancilla();
    if (partners.empty()) throw InvalidArgument("need at least one partner qubit");
    std::vector<uint32_t> sorted = partners;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
      throw InvalidArgument("partner qubits must be distinct");
    }
    if (sorted.back() >= code_.n) throw InvalidArgument("partner qubit out of range");
    ParityLabel label;
    for (uint32_t q : sorted) label = label ^ (*code_.labels)[q];
    if (declared.has_value() && !(*declared == label)) {
      throw InvalidArgument("declared label does not match the partner XOR");
    }

    uint32_t fresh = code_.n;
    state_.append_qubit(WireInit::plus());
    frame_.append_qubit();
    std::vector<uint32_t> support = sorted;
    support.push_back(fresh);

    MeasureResult r = measure_untraced(PauliString::z_on(fresh + 1, support));
    PauliString correction(fresh + 1);
    if (r.outcome == -1) {
      correction.set_axis(fresh, 'X');
      put_correction(correction);
    }

    code_.n += 1;
    code_.stabilizers.push_back(support);
    code_.labels->push_back(label);
    code_.coords.reset();
    excluded_.push_back(false);

    DeformationStep step;
    step.kind = DeformationStep::Kind::Add;
    step.qubit = fresh;
    step.label = label;
    step.connecting_stabilizer = support;
    step.outcome = r.outcome;
    step.deterministic = r.deterministic;
    step.correction = correction;
    step.mode = mode_;
    push_deform(step);
    return step;
  }

  /// Removes a parity qubit: re-bases every other stabilizer off the linking
  /// one (lowest index containing the qubit, unless overridden), measures X
  /// on the qubit, applies (or frame-records) Z on the rest of the linking
  /// support when the outcome is -1, and discards the wire. The linking
  /// stabilizer leaves the code; wires above shift down.
  DeformationStep remove_parity_qubit(uint32_t qubit,
                                      std::optional<size_t> linking_override = std::nullopt) {
    require_no_ancilla();
    if (qubit >= code_.n) throw InvalidArgument("qubit index out of range");
    size_t linking = SIZE_MAX;
    if (linking_override.has_value()) {
      linking = *linking_override;
      if (linking >= code_.stabilizers.size()) {
        throw InvalidArgument("linking index out of range");
      }
      const auto& sup = code_.stabilizers[linking];
      if (!std::binary_search(sup.begin(), sup.end(), qubit)) {
        throw InvalidArgument("linking stabilizer does not contain the qubit");
      }
    } else {
      for (size_t s = 0; s < code_.stabilizers.size(); ++s) {
        const auto& sup = code_.stabilizers[s];
        if (std::binary_search(sup.begin(), sup.end(), qubit)) {
          linking = s;
          break;
        }
      }
      if (linking == SIZE_MAX) {
        throw InvalidArgument("qubit is in no stabilizer; removal would change k");
      }
    }

    code_.stabilizers = rebase_stabilizers(code_.stabilizers, qubit, linking);
    std::vector<uint32_t> link = code_.stabilizers[linking];
    ParityLabel label = (*code_.labels)[qubit];

    MeasureResult r = measure_untraced(PauliString::single(code_.n, qubit, 'X'));
    PauliString correction(code_.n);
    if (r.outcome == -1) {
      for (uint32_t q : link) {
        if (q != qubit) correction.set_axis(q, 'Z');
      }
      put_correction(correction);
    }

    // The raw wire eigenstate can differ from the frame-adjusted outcome.
    int raw_sign = frame_.z_bit(qubit) ? -r.outcome : r.outcome;
    state_.discard_qubit(qubit, 'X', raw_sign);
    frame_.erase_qubit(qubit);

    code_.stabilizers.erase(code_.stabilizers.begin() + linking);
    excluded_.erase(excluded_.begin() + linking);
    for (auto& sup : code_.stabilizers) {
      for (uint32_t& q : sup) {
        if (q > qubit) --q;
      }
    }
    code_.labels->erase(code_.labels->begin() + qubit);
    code_.coords.reset();
    code_.n -= 1;

    DeformationStep step;
    step.kind = DeformationStep::Kind::Remove;
    step.qubit = qubit;
    step.label = label;
    step.connecting_stabilizer = link;
    step.outcome = r.outcome;
    step.deterministic = r.deterministic;
    step.correction = correction;
    step.mode = mode_;
    push_deform(step);
    return step;
  }

  /// Appends a protocol ancilla wire above the code qubits.
  uint32_t append_ancilla(WireInit init) {
    uint32_t wire = width();
    state_.append_qubit(init);
    frame_.append_qubit();
    TraceEvent ev;
    ev.kind = TraceEvent::Kind::Append;
    ev.index = wire;
    ev.context = init.kind == WireInit::Kind::Plus ? "+" : "0";
    trace_.events.push_back(std::move(ev));
    return wire;
  }

  /// Discards an ancilla wire known to sit in the given eigenstate
  /// (frame-adjusted sign). Code qubits leave via remove_parity_qubit.
  void discard_ancilla(uint32_t wire, char axis, int true_sign) {
    if (wire < code_.n) {
      throw ProtocolViolation("code qubits are removed via remove_parity_qubit");
    }
    bool flip = axis == 'X' ? frame_.z_bit(wire) : frame_.x_bit(wire);
    state_.discard_qubit(wire, axis, flip ? -true_sign : true_sign);
    frame_.erase_qubit(wire);
    TraceEvent ev;
    ev.kind = TraceEvent::Kind::Discard;
    ev.index = wire;
    ev.outcome = true_sign;
    ev.context = std::string(1, axis);
    trace_.events.push_back(std::move(ev));
  }

  /// Applies a unitary gate, pushing any pending frame through it first.
  void apply_gate(const GateRecord& g) {
    frame_.conjugate_through(g);
    state_.apply_gate(g);
    TraceEvent ev;
    ev.kind = TraceEvent::Kind::Gate;
    ev.gate = g;
    trace_.events.push_back(std::move(ev));
  }

  /// Frame-adjusted measurement, logged under a context tag.
  MeasureResult measure(const PauliString& p, const std::string& context) {
    MeasureResult r = measure_untraced(p);
    TraceEvent ev;
    ev.kind = TraceEvent::Kind::Measure;
    ev.pauli = p;
    ev.outcome = r.outcome;
    ev.deterministic = r.deterministic;
    ev.context = context;
    trace_.events.push_back(std::move(ev));
    return r;
  }

  /// Measures every active (non-excluded) code stabilizer.
  std::vector<SyndromeRecord> syndrome_sweep() {
    std::vector<SyndromeRecord> out;
    for (size_t s = 0; s < code_.stabilizers.size(); ++s) {
      if (excluded_[s]) continue;
      MeasureResult r = measure(PauliString::z_on(width(), code_.stabilizers[s]), "syndrome");
      out.push_back({static_cast<uint32_t>(s), r.outcome, r.deterministic});
    }
    return out;
  }

  void exclude_stabilizer(size_t index) {
    if (index >= excluded_.size()) throw InvalidArgument("stabilizer index out of range");
    if (excluded_[index]) throw ProtocolViolation("stabilizer is already excluded");
    excluded_[index] = true;
    TraceEvent ev;
    ev.kind = TraceEvent::Kind::Exclude;
    ev.index = static_cast<uint32_t>(index);
    trace_.events.push_back(std::move(ev));
  }

  void reactivate_stabilizer(size_t index) {
    if (index >= excluded_.size()) throw InvalidArgument("stabilizer index out of range");
    if (!excluded_[index]) throw ProtocolViolation("stabilizer is not excluded");
    excluded_[index] = false;
    TraceEvent ev;
    ev.kind = TraceEvent::Kind::Reactivate;
    ev.index = static_cast<uint32_t>(index);
    trace_.events.push_back(std::move(ev));
  }

  /// Applies a Pauli physically or records it, per the run's mode.
  void apply_correction(const PauliString& p, const std::string& context) {
    put_correction(p);
    TraceEvent ev;
    ev.kind = TraceEvent::Kind::Correction;
    ev.pauli = p;
    ev.context = context;
    ev.mode = mode_;
    trace_.events.push_back(std::move(ev));
  }

  /// Physically applies a pending frame X on one wire and clears the bit.
  /// Needed before rotating that wire, since X does not commute with RZ.
  void flush_frame_x(uint32_t q) {
    if (!frame_.x_bit(q)) return;
    PauliString p = PauliString::single(width(), q, 'X');
    state_.apply_pauli(p);
    frame_.clear_x(q);
    TraceEvent ev;
    ev.kind = TraceEvent::Kind::Correction;
    ev.pauli = p;
    ev.context = "frame-flush";
    ev.mode = CorrectionMode::Physical;
    trace_.events.push_back(std::move(ev));
  }

  /// Applies the whole pending frame physically and clears it.
  void flush_frame() {
    if (frame_.empty()) return;
    PauliString p = frame_.as_pauli();
    state_.apply_pauli(p);
    frame_ = PauliFrame(width());
    TraceEvent ev;
    ev.kind = TraceEvent::Kind::Correction;
    ev.pauli = p;
    ev.context = "frame-flush";
    ev.mode = CorrectionMode::Physical;
    trace_.events.push_back(std::move(ev));
  }

  /// Verifies a scripted run consumed its whole outcome script.
  void finish() const { outcomes_.finish(); }

 private:
  void require_no_ancilla() const {
    if (width() != code_.n) {
      throw ProtocolViolation("ancilla wires outstanding; cannot deform the code");
    }
  }

  MeasureResult measure_untraced(const PauliString& p) {
    return measure_framed(state_, frame_, p, outcomes_.next_forced(), outcomes_.rng());
  }

  void push_deform(const DeformationStep& step) {
    TraceEvent ev;
    ev.kind = TraceEvent::Kind::Deform;
    ev.step = step;
    ev.mode = mode_;
    trace_.events.push_back(std::move(ev));
  }

  void put_correction(const PauliString& p) {
    if (mode_ == CorrectionMode::Physical) {
      state_.apply_pauli(p);
    } else {
      frame_.record(p);
    }
  }

  ClassicalParityCode code_;
  State state_;
  PauliFrame frame_;
  CorrectionMode mode_;
  OutcomeSource outcomes_;
  ProtocolTrace trace_;
  std::vector<bool> excluded_;
};

}  // namespace parityq
