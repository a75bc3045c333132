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
#include <cstdint>
#include <string>
#include <vector>

#include "parityq/errors.hpp"
#include "parityq/gf2.hpp"

namespace parityq {

/// Hermitian Pauli product with a +-1 sign: sign * prod_q P_q where each
/// Outcome of a projective Pauli measurement. deterministic means the state
/// already fixed the outcome before measuring.
struct MeasureResult {
  int outcome = 0;
  bool deterministic = false;
};

/// P_q in {I, X, Y, Z}. X/Z supports are bit vectors; a qubit with both bits
/// set carries Y.
class PauliString {
 public:
  BitVector x;
  BitVector z;
  bool negative = false;

  PauliString() = default;
  explicit PauliString(size_t n) : x(n), z(n) {}

  static PauliString identity(size_t n) { return PauliString(n); }

  static PauliString single(size_t n, uint32_t q, char axis, bool neg = false) {
    PauliString p(n);
    p.set_axis(q, axis);
    p.negative = neg;
    return p;
  }

  /// Z-type product over a qubit set.
  static PauliString z_on(size_t n, const std::vector<uint32_t>& qubits) {
    PauliString p(n);
    for (uint32_t q : qubits) p.set_axis(q, 'Z');
    return p;
  }

  /// X-type product over a qubit set.
  static PauliString x_on(size_t n, const std::vector<uint32_t>& qubits) {
    PauliString p(n);
    for (uint32_t q : qubits) p.set_axis(q, 'X');
    return p;
  }

  size_t num_qubits() const { return x.size(); }

  char axis(uint32_t q) const {
    bool xb = x.get(q), zb = z.get(q);
    if (xb && zb) return 'Y';
    if (xb) return 'X';
    if (zb) return 'Z';
    return 'I';
  }

  void set_axis(uint32_t q, char axis) {
    if (q >= num_qubits()) throw InvalidArgument("qubit index out of range");
    switch (axis) {
      case 'I': x.set(q, false); z.set(q, false); break;
      case 'X': x.set(q, true); z.set(q, false); break;
      case 'Y': x.set(q, true); z.set(q, true); break;
      case 'Z': x.set(q, false); z.set(q, true); break;
      default: throw InvalidArgument("unknown Pauli axis");
    }
  }

  bool is_identity() const { return !x.any() && !z.any(); }

  size_t weight() const {
    size_t c = 0;
    const auto& xw = x.words();
    const auto& zw = z.words();
    for (size_t i = 0; i < xw.size(); ++i) c += std::popcount(xw[i] | zw[i]);
    return c;
  }

  std::vector<uint32_t> support() const {
    std::vector<uint32_t> out;
    for (size_t q = 0; q < num_qubits(); ++q) {
      if (x.get(q) || z.get(q)) out.push_back(static_cast<uint32_t>(q));
    }
    return out;
  }

  bool commutes_with(const PauliString& o) const {
    return !(x.overlap_parity(o.z) ^ z.overlap_parity(o.x));
  }

  /// Exponent m in {0,1,2,3} such that, ignoring both signs,
  /// canonical(*this) * canonical(o) = i^m * canonical(xor of supports).
  int product_phase_exponent(const PauliString& o) const {
    if (num_qubits() != o.num_qubits()) {
      throw InvalidArgument("pauli length mismatch");
    }
    const auto& xa = x.words();
    const auto& za = z.words();
    const auto& xb = o.x.words();
    const auto& zb = o.z.words();
    long plus = 0, minus = 0;
    for (size_t i = 0; i < xa.size(); ++i) {
      uint64_t ax = xa[i] & ~za[i], ay = xa[i] & za[i], az = za[i] & ~xa[i];
      uint64_t bx = xb[i] & ~zb[i], by = xb[i] & zb[i], bz = zb[i] & ~xb[i];
      plus += std::popcount((ax & by) | (ay & bz) | (az & bx));
      minus += std::popcount((ax & bz) | (ay & bx) | (az & by));
    }
    return static_cast<int>(((plus - minus) % 4 + 4) % 4);
  }

  /// In-place product *this := *this * o. The product of two commuting
  /// Hermitian Paulis is Hermitian; anticommuting products would carry a
  /// factor of +-i and are rejected.
  void multiply_by(const PauliString& o) {
    int m = product_phase_exponent(o);
    if (m & 1) throw InvalidArgument("product of anticommuting Paulis is not Hermitian");
    negative = negative ^ o.negative ^ (m == 2);
    x ^= o.x;
    z ^= o.z;
  }

  bool operator==(const PauliString& o) const = default;

  /// Renders as e.g. "Z0*Z1*Z5" or "-X2*Y3"; the identity is "I".
  std::string str() const {
    std::string s = negative ? "-" : "";
    bool first = true;
    for (size_t q = 0; q < num_qubits(); ++q) {
      char a = axis(static_cast<uint32_t>(q));
      if (a == 'I') continue;
      if (!first) s.push_back('*');
      s.push_back(a);
      s += std::to_string(q);
      first = false;
    }
    if (first) s += "I";
    return s;
  }

  /// Parses the str() format on n qubits. Accepts an optional leading '+'
  /// or '-' and terms like "X0", "Y12", "Z3" joined by '*'.
  static PauliString parse(const std::string& text, size_t n) {
    PauliString p(n);
    size_t i = 0;
    if (i < text.size() && (text[i] == '+' || text[i] == '-')) {
      p.negative = text[i] == '-';
      ++i;
    }
    if (text.substr(i) == "I") return p;
    while (i < text.size()) {
      char a = text[i];
      if (a != 'X' && a != 'Y' && a != 'Z') {
        throw ParseError("bad Pauli term at '" + text.substr(i) + "'");
      }
      ++i;
      size_t start = i;
      while (i < text.size() && text[i] >= '0' && text[i] <= '9') ++i;
      if (start == i) throw ParseError("missing qubit index in Pauli '" + text + "'");
      unsigned long q = std::stoul(text.substr(start, i - start));
      if (q >= n) throw ParseError("qubit index out of range in Pauli '" + text + "'");
      if (p.axis(static_cast<uint32_t>(q)) != 'I') {
        throw ParseError("repeated qubit in Pauli '" + text + "'");
      }
      p.set_axis(static_cast<uint32_t>(q), a);
      if (i < text.size()) {
        if (text[i] != '*') throw ParseError("expected '*' in Pauli '" + text + "'");
        ++i;
        if (i == text.size()) throw ParseError("trailing '*' in Pauli '" + text + "'");
      }
    }
    return p;
  }
};

}  // namespace parityq
