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
#include <cmath>
#include <complex>
#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "parityq/circuit.hpp"
#include "parityq/code.hpp"
#include "parityq/errors.hpp"
#include "parityq/pauli.hpp"

namespace parityq {

/// Dense complex statevector on up to 14 qubits. Qubit q is bit q of the
/// basis index (qubit 0 least significant). The exact-arithmetic oracle the
/// stabilizer backend is checked against.
class StateVector {
 public:
  static constexpr uint32_t kMaxQubits = 14;
  using Complex = std::complex<double>;

  explicit StateVector(uint32_t n) : n_(check_width(n)), amp_(size_t{1} << n, 0.0) {
    amp_[0] = 1.0;
  }

  static StateVector basis_state(uint32_t n, uint64_t bits) {
    StateVector sv(n);
    if (bits >> n) throw InvalidArgument("basis index out of range");
    sv.amp_[0] = 0.0;
    sv.amp_[bits] = 1.0;
    return sv;
  }

  uint32_t num_qubits() const { return n_; }
  size_t dim() const { return amp_.size(); }
  Complex amplitude(uint64_t idx) const { return amp_.at(idx); }

  double norm() const {
    double s = 0;
    for (const Complex& a : amp_) s += std::norm(a);
    return std::sqrt(s);
  }

  void apply_x(uint32_t q) {
    check_qubit(q);
    uint64_t bit = uint64_t{1} << q;
    for (uint64_t i = 0; i < amp_.size(); ++i) {
      if (!(i & bit)) std::swap(amp_[i], amp_[i | bit]);
    }
  }

  void apply_z(uint32_t q) {
    check_qubit(q);
    uint64_t bit = uint64_t{1} << q;
    for (uint64_t i = 0; i < amp_.size(); ++i) {
      if (i & bit) amp_[i] = -amp_[i];
    }
  }

  void apply_h(uint32_t q) {
    check_qubit(q);
    uint64_t bit = uint64_t{1} << q;
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    for (uint64_t i = 0; i < amp_.size(); ++i) {
      if (i & bit) continue;
      Complex a = amp_[i], b = amp_[i | bit];
      amp_[i] = (a + b) * inv_sqrt2;
      amp_[i | bit] = (a - b) * inv_sqrt2;
    }
  }

  void apply_s(uint32_t q) {
    check_qubit(q);
    uint64_t bit = uint64_t{1} << q;
    for (uint64_t i = 0; i < amp_.size(); ++i) {
      if (i & bit) amp_[i] *= Complex(0.0, 1.0);
    }
  }

  /// exp(-i angle/2 Z): diag(e^{-i angle/2}, e^{+i angle/2}).
  void apply_rz(double angle, uint32_t q) {
    check_qubit(q);
    uint64_t bit = uint64_t{1} << q;
    Complex lo = std::polar(1.0, -angle / 2);
    Complex hi = std::polar(1.0, angle / 2);
    for (uint64_t i = 0; i < amp_.size(); ++i) {
      amp_[i] *= (i & bit) ? hi : lo;
    }
  }

  void apply_cnot(uint32_t c, uint32_t t) {
    check_qubit(c);
    check_qubit(t);
    if (c == t) throw InvalidArgument("CNOT control equals target");
    uint64_t cb = uint64_t{1} << c, tb = uint64_t{1} << t;
    for (uint64_t i = 0; i < amp_.size(); ++i) {
      if ((i & cb) && !(i & tb)) std::swap(amp_[i], amp_[i | tb]);
    }
  }

  void apply_gate(const GateRecord& g) {
    switch (g.kind) {
      case GateKind::CNOT: apply_cnot(g.q0, g.q1); return;
      case GateKind::H: apply_h(g.q0); return;
      case GateKind::S: apply_s(g.q0); return;
      case GateKind::X: apply_x(g.q0); return;
      case GateKind::Z: apply_z(g.q0); return;
      case GateKind::RZ: apply_rz(g.angle, g.q0); return;
      default: throw InvalidArgument("measurement records are not unitary gates");
    }
  }

  /// Applies a signed Pauli string including the i-per-Y phase.
  void apply_pauli(const PauliString& p) {
    if (p.num_qubits() != n_) throw InvalidArgument("pauli length mismatch");
    uint64_t xmask = mask_of(p.x), zmask = mask_of(p.z);
    int ys = 0;
    for (uint32_t q = 0; q < n_; ++q) ys += p.axis(q) == 'Y';
    Complex phase = std::pow(Complex(0.0, 1.0), ys % 4);
    if (p.negative) phase = -phase;
    std::vector<Complex> out(amp_.size());
    for (uint64_t b = 0; b < amp_.size(); ++b) {
      double sgn = (std::popcount(b & zmask) & 1) ? -1.0 : 1.0;
      out[b ^ xmask] = phase * sgn * amp_[b];
    }
    amp_ = std::move(out);
  }

  /// Real part of <psi|P|psi> (exact expectation for Hermitian P).
  double expectation_pauli(const PauliString& p) const {
    if (p.num_qubits() != n_) throw InvalidArgument("pauli length mismatch");
    StateVector tmp = *this;
    tmp.apply_pauli(p);
    Complex acc = 0.0;
    for (uint64_t b = 0; b < amp_.size(); ++b) acc += std::conj(amp_[b]) * tmp.amp_[b];
    return acc.real();
  }

  /// Projective measurement of a Pauli product. Outcomes within 1e-12 of
  /// certainty count as deterministic; a forced outcome with (near) zero
  /// probability throws.
  MeasureResult measure_pauli(const PauliString& p, std::optional<int> forced,
                              std::mt19937_64& rng) {
    if (p.is_identity()) throw InvalidArgument("cannot measure the identity");
    if (forced.has_value() && *forced != 1 && *forced != -1) {
      throw InvalidArgument("forced outcome must be +1 or -1");
    }
    StateVector pp = *this;
    pp.apply_pauli(p);
    Complex inner = 0.0;
    for (uint64_t b = 0; b < amp_.size(); ++b) inner += std::conj(amp_[b]) * pp.amp_[b];
    double expec = inner.real();
    double prob_plus = std::min(1.0, std::max(0.0, (1.0 + expec) / 2.0));
    constexpr double tol = 1e-12;

    bool deterministic = prob_plus >= 1.0 - tol || prob_plus <= tol;
    int outcome;
    if (deterministic) {
      outcome = prob_plus >= 0.5 ? 1 : -1;
      if (forced.has_value() && *forced != outcome) {
        throw ForcedOutcomeContradiction(
            "forced outcome contradicts a deterministic measurement");
      }
    } else if (forced.has_value()) {
      outcome = *forced;
    } else {
      outcome = std::uniform_real_distribution<double>(0.0, 1.0)(rng) < prob_plus ? 1 : -1;
    }

    double prob = outcome == 1 ? prob_plus : 1.0 - prob_plus;
    double scale = 1.0 / (2.0 * std::sqrt(prob));
    for (uint64_t b = 0; b < amp_.size(); ++b) {
      amp_[b] = (amp_[b] + static_cast<double>(outcome) * pp.amp_[b]) * scale;
    }
    return {outcome, deterministic};
  }

  void append_qubit(WireInit init) {
    if (init.kind == WireInit::Kind::Logical) {
      throw InvalidArgument("cannot append a logical-input wire to a concrete state");
    }
    check_width(n_ + 1);
    size_t old = amp_.size();
    amp_.resize(old * 2, 0.0);
    if (init.kind == WireInit::Kind::Plus) {
      const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
      for (size_t i = 0; i < old; ++i) {
        amp_[i + old] = amp_[i] * inv_sqrt2;
        amp_[i] *= inv_sqrt2;
      }
    }
    ++n_;
  }

  /// Removes wire q, which must hold the single-qubit eigenstate
  /// sign * X_q or sign * Z_q in tensor product with the rest (residual
  /// entanglement beyond 1e-9 throws). Wires above q shift down.
  void discard_qubit(uint32_t q, char axis, int sign) {
    check_qubit(q);
    if (axis != 'X' && axis != 'Z') throw InvalidArgument("axis must be X or Z");
    if (sign != 1 && sign != -1) throw InvalidArgument("sign must be +1 or -1");
    uint64_t low = (uint64_t{1} << q) - 1;
    std::vector<Complex> out(amp_.size() / 2);
    double kept = 0, lost = 0;
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    for (uint64_t r = 0; r < out.size(); ++r) {
      uint64_t base = ((r & ~low) << 1) | (r & low);
      Complex a0 = amp_[base], a1 = amp_[base | (uint64_t{1} << q)];
      Complex keep, drop;
      if (axis == 'Z') {
        keep = sign == 1 ? a0 : a1;
        drop = sign == 1 ? a1 : a0;
      } else {
        keep = (a0 + static_cast<double>(sign) * a1) * inv_sqrt2;
        drop = (a0 - static_cast<double>(sign) * a1) * inv_sqrt2;
      }
      out[r] = keep;
      kept += std::norm(keep);
      lost += std::norm(drop);
    }
    if (lost > 1e-9) {
      throw ProtocolViolation("wire is not in the requested eigenstate; cannot discard");
    }
    double scale = 1.0 / std::sqrt(kept);
    for (Complex& a : out) a *= scale;
    amp_ = std::move(out);
    --n_;
  }

 private:
  static uint32_t check_width(uint32_t n) {
    if (n > kMaxQubits) {
      throw GuardExceeded("statevector limited to " + std::to_string(kMaxQubits) +
                          " qubits");
    }
    return n;
  }

  void check_qubit(uint32_t q) const {
    if (q >= n_) throw InvalidArgument("qubit index out of range");
  }

  uint64_t mask_of(const BitVector& v) const {
    uint64_t m = 0;
    for (uint32_t q = 0; q < n_; ++q) {
      if (v.get(q)) m |= uint64_t{1} << q;
    }
    return m;
  }

  uint32_t n_;
  std::vector<Complex> amp_;
};

/// Basis index of the code state |c(b)>: qubit q is set iff b has odd
/// parity over label(q).
inline uint64_t code_basis_index(const std::vector<ParityLabel>& labels, uint64_t b) {
  uint64_t idx = 0;
  for (uint32_t q = 0; q < labels.size(); ++q) {
    int parity = 0;
    for (uint32_t i : labels[q].indices()) parity ^= static_cast<int>((b >> i) & 1);
    if (parity) idx |= uint64_t{1} << q;
  }
  return idx;
}

inline StateVector prepare_code_vector(const ClassicalParityCode& code,
                                       const std::vector<ParityLabel>& labels,
                                       uint64_t b) {
  if (labels.size() != code.n) throw InvalidArgument("label list length must equal n");
  if (code.k < 64 && (b >> code.k)) throw InvalidArgument("logical index out of range");
  return StateVector::basis_state(code.n, code_basis_index(labels, b));
}

struct LogicalActionReport {
  Eigen::MatrixXcd logical;  // 2^k x 2^k, entries <c(b')|U|c(b)>
  /// Largest out-of-code-space column norm.
  double leakage = 0.0;
  /// leakage <= 1e-9.
  bool block_preserving = false;
};

/// Compresses a measurement-free circuit to its action on the code space:
/// logical(b', b) = <c(b')| U |c(b)>. Unitary on the logicals iff the
/// circuit preserves the code space (leakage ~ 0).
inline LogicalActionReport logical_action(const ClassicalParityCode& code,
                                          const std::vector<ParityLabel>& labels,
                                          const Circuit& circuit) {
  if (circuit.num_qubits != code.n) throw InvalidArgument("circuit width mismatch");
  if (circuit.has_measurements()) {
    throw InvalidArgument("logical action is defined for measurement-free circuits");
  }
  if (code.k > StateVector::kMaxQubits) {
    throw GuardExceeded("logical dimension too large");
  }
  size_t dim = size_t{1} << code.k;
  LogicalActionReport rep;
  rep.logical.resize(dim, dim);
  rep.leakage = 0.0;
  for (uint64_t b = 0; b < dim; ++b) {
    StateVector sv = prepare_code_vector(code, labels, b);
    for (const auto& g : circuit.gates) sv.apply_gate(g);
    double in_block = 0.0;
    for (uint64_t bp = 0; bp < dim; ++bp) {
      std::complex<double> e = sv.amplitude(code_basis_index(labels, bp));
      rep.logical(bp, b) = e;
      in_block += std::norm(e);
    }
    // Out-of-block amplitude, measured against the actual norm so that
    // rounding in the norm itself does not read as leakage.
    double total = sv.norm();
    rep.leakage = std::max(rep.leakage, std::sqrt(std::max(0.0, total * total - in_block)));
  }
  rep.block_preserving = rep.leakage <= 1e-9;
  return rep;
}

/// |tr(A^dagger B)| / dim: 1 exactly when A and B agree up to a global
/// phase (for unitaries).
inline double fidelity_up_to_phase(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols() || a.rows() != a.cols()) {
    throw InvalidArgument("fidelity needs square matrices of equal size");
  }
  return std::abs((a.adjoint() * b).trace()) / static_cast<double>(a.rows());
}

}  // namespace parityq
