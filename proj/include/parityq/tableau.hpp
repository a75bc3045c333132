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

#include <bit>
#include <cassert>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "parityq/circuit.hpp"
#include "parityq/code.hpp"
#include "parityq/errors.hpp"
#include "parityq/pauli.hpp"

namespace parityq {

/// Pure stabilizer state on n qubits, tracked as n stabilizer and n
/// destabilizer generators with exact signs. Supports Clifford gates,
/// measurement of arbitrary Pauli products (with optional forced outcomes),
/// qubit append, and qubit removal after a wire has been projected onto a
/// known single-qubit eigenstate.
class StabilizerTableau {
 public:
  explicit StabilizerTableau(uint32_t n) : n_(n) {
    rows_.reserve(2 * n);
    for (uint32_t i = 0; i < n; ++i) rows_.push_back(Row::single(n, i, false));  // X_i
    for (uint32_t i = 0; i < n; ++i) rows_.push_back(Row::single(n, i, true));   // Z_i
  }

  uint32_t num_qubits() const { return n_; }

  /// The i-th stabilizer generator as a signed Pauli string.
  PauliString stabilizer(uint32_t i) const { return row_pauli(n_ + i); }
  PauliString destabilizer(uint32_t i) const { return row_pauli(i); }

  void apply_cnot(uint32_t c, uint32_t t) {
    check_qubit(c);
    check_qubit(t);
    if (c == t) throw InvalidArgument("CNOT control equals target");
    for (Row& r : rows_) {
      if (r.x.get(c) && r.z.get(t) && (r.x.get(t) == r.z.get(c))) r.sign = !r.sign;
      r.x.set(t, r.x.get(t) ^ r.x.get(c));
      r.z.set(c, r.z.get(c) ^ r.z.get(t));
    }
  }

  void apply_h(uint32_t q) {
    check_qubit(q);
    for (Row& r : rows_) {
      bool xq = r.x.get(q), zq = r.z.get(q);
      if (xq && zq) r.sign = !r.sign;
      r.x.set(q, zq);
      r.z.set(q, xq);
    }
  }

  void apply_s(uint32_t q) {
    check_qubit(q);
    for (Row& r : rows_) {
      bool xq = r.x.get(q), zq = r.z.get(q);
      if (xq && zq) r.sign = !r.sign;
      r.z.set(q, zq ^ xq);
    }
  }

  void apply_x(uint32_t q) {
    check_qubit(q);
    for (Row& r : rows_) {
      if (r.z.get(q)) r.sign = !r.sign;
    }
  }

  void apply_z(uint32_t q) {
    check_qubit(q);
    for (Row& r : rows_) {
      if (r.x.get(q)) r.sign = !r.sign;
    }
  }

  /// Applies a unitary gate record. RZ is accepted only at multiples of
  /// pi/2 (where it is Clifford up to global phase); measurements are not
  /// gates at this level.
  void apply_gate(const GateRecord& g) {
    switch (g.kind) {
      case GateKind::CNOT: apply_cnot(g.q0, g.q1); return;
      case GateKind::H: apply_h(g.q0); return;
      case GateKind::S: apply_s(g.q0); return;
      case GateKind::X: apply_x(g.q0); return;
      case GateKind::Z: apply_z(g.q0); return;
      case GateKind::RZ: {
        constexpr double half_pi = 1.5707963267948966;
        double turns = g.angle / half_pi;
        double rounded = std::nearbyint(turns);
        if (std::abs(turns - rounded) > 1e-9) {
          throw ProtocolViolation(
              "stabilizer backend supports RZ only at multiples of pi/2");
        }
        int m = static_cast<int>(rounded) % 4;
        if (m < 0) m += 4;
        for (int i = 0; i < m; ++i) apply_s(g.q0);
        return;
      }
      default:
        throw InvalidArgument("measurement records are not unitary gates");
    }
  }

  /// Applies a signed Pauli product as a unitary (sign is a global phase and
  /// is ignored).
  void apply_pauli(const PauliString& p) {
    if (p.num_qubits() != n_) throw InvalidArgument("pauli length mismatch");
    for (uint32_t q = 0; q < n_; ++q) {
      switch (p.axis(q)) {
        case 'X': apply_x(q); break;
        case 'Z': apply_z(q); break;
        case 'Y': apply_z(q); apply_x(q); break;
        default: break;
      }
    }
  }

  /// Expectation of a Pauli product if it is determined by the state
  /// (+1/-1), nullopt if the measurement would be random. Never disturbs
  /// the state.
  std::optional<int> deterministic_expectation(const PauliString& p) const {
    if (p.num_qubits() != n_) throw InvalidArgument("pauli length mismatch");
    for (uint32_t i = 0; i < n_; ++i) {
      if (anticommutes(rows_[n_ + i], p)) return std::nullopt;
    }
    return deterministic_sign(p);
  }

  /// Measures a Pauli product. A forced outcome substitutes for the random
  /// draw; forcing a deterministic measurement to the wrong value throws.
  MeasureResult measure_pauli(const PauliString& p, std::optional<int> forced,
                              std::mt19937_64& rng) {
    if (p.num_qubits() != n_) throw InvalidArgument("pauli length mismatch");
    if (p.is_identity()) throw InvalidArgument("cannot measure the identity");
    if (forced.has_value() && *forced != 1 && *forced != -1) {
      throw InvalidArgument("forced outcome must be +1 or -1");
    }
    uint32_t pivot = UINT32_MAX;
    for (uint32_t i = 0; i < n_; ++i) {
      if (anticommutes(rows_[n_ + i], p)) {
        pivot = n_ + i;
        break;
      }
    }
    if (pivot == UINT32_MAX) {
      int outcome = deterministic_sign(p);
      if (forced.has_value() && *forced != outcome) {
        throw ForcedOutcomeContradiction(
            "forced outcome contradicts a deterministic measurement");
      }
      return {outcome, true};
    }
    int outcome = forced.has_value() ? *forced : ((rng() & 1) ? -1 : 1);
    for (uint32_t r = 0; r < n_; ++r) {
      if (anticommutes(rows_[r], p)) row_mult_unsigned(rows_[r], rows_[pivot]);
    }
    for (uint32_t r = n_; r < 2 * n_; ++r) {
      if (r != pivot && anticommutes(rows_[r], p)) row_mult(rows_[r], rows_[pivot]);
    }
    rows_[pivot - n_] = rows_[pivot];
    Row& stab = rows_[pivot];
    stab.x = p.x;
    stab.z = p.z;
    stab.sign = (outcome == -1) ^ p.negative;
    return {outcome, false};
  }

  /// Adds a fresh qubit in |0> or |+> at index num_qubits().
  void append_qubit(WireInit init) {
    if (init.kind == WireInit::Kind::Logical) {
      throw InvalidArgument("cannot append a logical-input wire to a concrete state");
    }
    for (Row& r : rows_) {
      r.x.push_back(false);
      r.z.push_back(false);
    }
    bool plus = init.kind == WireInit::Kind::Plus;
    Row destab = Row::single(n_ + 1, n_, plus);   // Z if plus else X
    Row stab = Row::single(n_ + 1, n_, !plus);    // X if plus else Z
    rows_.insert(rows_.begin() + n_, std::move(destab));
    rows_.push_back(std::move(stab));
    ++n_;
  }

  /// Removes wire q from a state where the qubit is already in a known
  /// single-qubit eigenstate: sign * X_q (axis 'X') or sign * Z_q ('Z')
  /// must stabilize the state. Remaining wires above q shift down by one.
  void discard_qubit(uint32_t q, char axis, int sign) {
    check_qubit(q);
    if (axis != 'X' && axis != 'Z') throw InvalidArgument("axis must be X or Z");
    if (sign != 1 && sign != -1) throw InvalidArgument("sign must be +1 or -1");
    PauliString eigen = PauliString::single(n_, q, axis, sign == -1);
    std::optional<int> det = deterministic_expectation(eigen);
    if (!det.has_value()) {
      throw ProtocolViolation("wire is still entangled; cannot discard");
    }
    if (*det != 1) throw ProtocolViolation("wire eigenstate has the opposite sign");

    // Primary bits: the eigenaxis support; dual: the anticommuting axis.
    auto primary = [axis](Row& r) -> BitVector& { return axis == 'X' ? r.x : r.z; };
    auto dual = [axis](Row& r) -> BitVector& { return axis == 'X' ? r.z : r.x; };

    uint32_t pivot = UINT32_MAX;
    for (uint32_t i = n_; i < 2 * n_; ++i) {
      // A stabilizer row touching q on the dual axis would anticommute with
      // the eigenoperator; determinism above rules that out.
      assert(!dual(rows_[i]).get(q));
      if (primary(rows_[i]).get(q) && pivot == UINT32_MAX) pivot = i;
    }
    if (pivot == UINT32_MAX) {
      throw ProtocolViolation("no stabilizer supports the discarded wire");
    }
    for (uint32_t i = n_; i < 2 * n_; ++i) {
      if (i != pivot && primary(rows_[i]).get(q)) row_mult(rows_[i], rows_[pivot]);
    }
    // Exchange the pivot pair for the product-state pair on q. The new pair
    // anticommutes as required; residual q-support elsewhere is cleared by
    // multiplying with the new pair, which leaves all other pairings intact.
    rows_[pivot] = Row::single(n_, q, axis == 'Z');
    rows_[pivot].sign = sign == -1;
    rows_[pivot - n_] = Row::single(n_, q, axis == 'X');
    // Clear residual q-support from the other destabilizers (bits only;
    // destabilizer signs are meaningless).
    for (uint32_t j = 0; j < n_; ++j) {
      if (j == pivot - n_) continue;
      if (dual(rows_[j]).get(q)) row_mult_unsigned(rows_[j], rows_[pivot - n_]);
      if (primary(rows_[j]).get(q)) row_mult_unsigned(rows_[j], rows_[pivot]);
    }
    rows_.erase(rows_.begin() + pivot);
    rows_.erase(rows_.begin() + (pivot - n_));
    --n_;
    for (Row& r : rows_) {
      r.x.erase(q);
      r.z.erase(q);
    }
  }

  /// Canonical stabilizer generators: Gaussian elimination over (X|Z) bit
  /// columns with exact sign bookkeeping. Two tableaux describe the same
  /// state iff their canonical generators match.
  std::vector<PauliString> canonical_generators() const {
    std::vector<Row> rows(rows_.begin() + n_, rows_.end());
    size_t pivot_row = 0;
    for (uint32_t col = 0; col < 2 * n_ && pivot_row < rows.size(); ++col) {
      bool is_x = col < n_;
      uint32_t q = is_x ? col : col - n_;
      auto bit = [&](const Row& r) { return is_x ? r.x.get(q) : r.z.get(q); };
      size_t sel = rows.size();
      for (size_t r = pivot_row; r < rows.size(); ++r) {
        if (bit(rows[r])) {
          sel = r;
          break;
        }
      }
      if (sel == rows.size()) continue;
      std::swap(rows[pivot_row], rows[sel]);
      for (size_t r = 0; r < rows.size(); ++r) {
        if (r != pivot_row && bit(rows[r])) row_mult(rows[r], rows[pivot_row]);
      }
      ++pivot_row;
    }
    std::vector<PauliString> out;
    out.reserve(rows.size());
    for (const Row& r : rows) {
      PauliString p(n_);
      p.x = r.x;
      p.z = r.z;
      p.negative = r.sign;
      out.push_back(std::move(p));
    }
    return out;
  }

  /// Debug check of the symplectic pairing invariants; used by tests.
  bool check_invariants() const {
    for (uint32_t i = 0; i < 2 * n_; ++i) {
      for (uint32_t j = i; j < 2 * n_; ++j) {
        bool anti = anticommutes(rows_[i], rows_[j]);
        bool expect = (j == i + n_) && i < n_;
        if (anti != expect) return false;
      }
    }
    return true;
  }

 private:
  struct Row {
    BitVector x, z;
    bool sign = false;

    static Row single(uint32_t n, uint32_t q, bool z_axis) {
      Row r{BitVector(n), BitVector(n), false};
      (z_axis ? r.z : r.x).set(q, true);
      return r;
    }
  };

  void check_qubit(uint32_t q) const {
    if (q >= n_) throw InvalidArgument("qubit index out of range");
  }

  PauliString row_pauli(uint32_t i) const {
    PauliString p(n_);
    p.x = rows_[i].x;
    p.z = rows_[i].z;
    p.negative = rows_[i].sign;
    return p;
  }

  static bool anticommutes(const Row& r, const PauliString& p) {
    return r.x.overlap_parity(p.z) ^ r.z.overlap_parity(p.x);
  }

  static bool anticommutes(const Row& a, const Row& b) {
    return a.x.overlap_parity(b.z) ^ a.z.overlap_parity(b.x);
  }

  /// a := a * b, bits only. For destabilizer rows: their sign is never read,
  /// and their product with an anticommuting row carries a factor of i that
  /// one sign bit cannot hold.
  static void row_mult_unsigned(Row& a, const Row& b) {
    a.x ^= b.x;
    a.z ^= b.z;
  }

  /// a := a * b with exact sign. Callers multiply commuting rows only, so
  /// the mod-4 phase of the canonical parts comes out real.
  static void row_mult(Row& a, const Row& b) {
    const auto& xa = a.x.words();
    const auto& za = a.z.words();
    const auto& xb = b.x.words();
    const auto& zb = b.z.words();
    long plus = 0, minus = 0;
    for (size_t i = 0; i < xa.size(); ++i) {
      uint64_t ax = xa[i] & ~za[i], ay = xa[i] & za[i], az = za[i] & ~xa[i];
      uint64_t bx = xb[i] & ~zb[i], by = xb[i] & zb[i], bz = zb[i] & ~xb[i];
      plus += std::popcount((ax & by) | (ay & bz) | (az & bx));
      minus += std::popcount((ax & bz) | (ay & bx) | (az & by));
    }
    int g = static_cast<int>(((plus - minus) % 4 + 4) % 4);
    assert(g % 2 == 0);
    a.sign = a.sign ^ b.sign ^ (g == 2);
    a.x ^= b.x;
    a.z ^= b.z;
  }

  /// Sign of a Pauli product that commutes with every stabilizer row: a
  /// full-rank tableau makes it a +-group member; the destabilizers select
  /// the generator combination.
  int deterministic_sign(const PauliString& p) const {
    Row scratch{BitVector(n_), BitVector(n_), false};
    for (uint32_t i = 0; i < n_; ++i) {
      if (anticommutes(rows_[i], p)) row_mult(scratch, rows_[n_ + i]);
    }
    assert(scratch.x == p.x && scratch.z == p.z);
    bool minus = scratch.sign ^ p.negative;
    return minus ? -1 : 1;
  }

  uint32_t n_ = 0;
  std::vector<Row> rows_;  // [0, n): destabilizers; [n, 2n): stabilizers
};

/// Result of checking a state against a code's stabilizers.
struct CodeSpaceCheck {
  bool pass = false;
  /// Stabilizers that are not deterministically +1.
  std::vector<uint32_t> violated;
};

inline CodeSpaceCheck in_code_space(const StabilizerTableau& t,
                                    const ClassicalParityCode& code) {
  if (t.num_qubits() != code.n) throw InvalidArgument("qubit count mismatch");
  CodeSpaceCheck out;
  for (uint32_t s = 0; s < code.stabilizers.size(); ++s) {
    auto det = t.deterministic_expectation(PauliString::z_on(code.n, code.stabilizers[s]));
    if (!det.has_value() || *det != 1) out.violated.push_back(s);
  }
  out.pass = out.violated.empty();
  return out;
}

/// Computational-basis code state |c(b)>: qubit q is 1 iff the parity of b
/// over label(q) is odd.
inline StabilizerTableau prepare_code_state(const ClassicalParityCode& code,
                                            const std::vector<ParityLabel>& labels,
                                            const std::vector<bool>& logical_bits) {
  if (labels.size() != code.n) throw InvalidArgument("label list length must equal n");
  if (logical_bits.size() != code.k) throw InvalidArgument("need one bit per logical");
  StabilizerTableau t(code.n);
  for (uint32_t q = 0; q < code.n; ++q) {
    bool bit = false;
    for (uint32_t i : labels[q].indices()) bit ^= logical_bits[i];
    if (bit) t.apply_x(q);
  }
  return t;
}

}  // namespace parityq
