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
#include <sstream>
#include <string>
#include <vector>

#include "parityq/errors.hpp"
#include "parityq/pauli.hpp"

namespace parityq {

enum class GateKind { CNOT, H, S, X, Z, RZ, MX, MZ, MPP };

inline bool is_measurement(GateKind k) {
  return k == GateKind::MX || k == GateKind::MZ || k == GateKind::MPP;
}

inline const char* gate_name(GateKind k) {
  switch (k) {
    case GateKind::CNOT: return "CNOT";
    case GateKind::H: return "H";
    case GateKind::S: return "S";
    case GateKind::X: return "X";
    case GateKind::Z: return "Z";
    case GateKind::RZ: return "RZ";
    case GateKind::MX: return "MX";
    case GateKind::MZ: return "MZ";
    case GateKind::MPP: return "MPP";
  }
  return "?";
}

/// Initial state of one wire: |0>, |+>, or the i-th logical input of an
/// encoding circuit.
struct WireInit {
  enum class Kind { Zero, Plus, Logical };
  Kind kind = Kind::Zero;
  uint32_t logical = 0;

  static WireInit zero() { return {Kind::Zero, 0}; }
  static WireInit plus() { return {Kind::Plus, 0}; }
  static WireInit logical_input(uint32_t i) { return {Kind::Logical, i}; }

  bool operator==(const WireInit&) const = default;
};

struct GateRecord {
  GateKind kind = GateKind::H;
  uint32_t q0 = 0;  // CNOT control; the sole operand otherwise
  uint32_t q1 = 0;  // CNOT target
  double angle = 0.0;
  std::optional<PauliString> pauli;  // MPP operand

  static GateRecord cnot(uint32_t c, uint32_t t) { return {GateKind::CNOT, c, t, 0.0, {}}; }
  static GateRecord h(uint32_t q) { return {GateKind::H, q, 0, 0.0, {}}; }
  static GateRecord s(uint32_t q) { return {GateKind::S, q, 0, 0.0, {}}; }
  static GateRecord x(uint32_t q) { return {GateKind::X, q, 0, 0.0, {}}; }
  static GateRecord z(uint32_t q) { return {GateKind::Z, q, 0, 0.0, {}}; }
  static GateRecord rz(double angle, uint32_t q) { return {GateKind::RZ, q, 0, angle, {}}; }
  static GateRecord mx(uint32_t q) { return {GateKind::MX, q, 0, 0.0, {}}; }
  static GateRecord mz(uint32_t q) { return {GateKind::MZ, q, 0, 0.0, {}}; }
  static GateRecord mpp(PauliString p) { return {GateKind::MPP, 0, 0, 0.0, std::move(p)}; }

  /// Qubits this operation acts on, ascending.
  std::vector<uint32_t> touched() const {
    if (kind == GateKind::CNOT) {
      return q0 < q1 ? std::vector<uint32_t>{q0, q1} : std::vector<uint32_t>{q1, q0};
    }
    if (kind == GateKind::MPP) return pauli->support();
    return {q0};
  }

  bool operator==(const GateRecord&) const = default;
};

/// A qubit circuit: wire count, per-wire initialization, and an ordered gate
/// list. Serializes to a line-oriented text format (see parse()).
struct Circuit {
  uint32_t num_qubits = 0;
  std::vector<WireInit> inits;  // size num_qubits
  std::vector<GateRecord> gates;

  Circuit() = default;
  explicit Circuit(uint32_t n) : num_qubits(n), inits(n, WireInit::zero()) {}

  bool operator==(const Circuit&) const = default;

  void append(GateRecord g) {
    validate_gate(g);
    gates.push_back(std::move(g));
  }

  void validate_gate(const GateRecord& g) const {
    if (g.kind == GateKind::CNOT) {
      if (g.q0 >= num_qubits || g.q1 >= num_qubits) {
        throw InvalidArgument("gate qubit out of range");
      }
      if (g.q0 == g.q1) throw InvalidArgument("CNOT control equals target");
      return;
    }
    if (g.kind == GateKind::MPP) {
      if (!g.pauli.has_value()) throw InvalidArgument("MPP without operand");
      if (g.pauli->num_qubits() != num_qubits) {
        throw InvalidArgument("MPP operand length mismatch");
      }
      if (g.pauli->is_identity()) throw InvalidArgument("MPP of identity");
      return;
    }
    if (g.q0 >= num_qubits) throw InvalidArgument("gate qubit out of range");
  }

  bool has_measurements() const {
    for (const auto& g : gates) {
      if (is_measurement(g.kind)) return true;
    }
    return false;
  }

  /// True when every gate is a Clifford unitary (RZ and measurements are
  /// not; RZ at multiples of pi/2 is handled by callers that can, this
  /// predicate stays syntactic).
  bool is_unitary_clifford() const {
    for (const auto& g : gates) {
      if (g.kind == GateKind::RZ || is_measurement(g.kind)) return false;
    }
    return true;
  }

  size_t count_measurements() const {
    size_t c = 0;
    for (const auto& g : gates) c += is_measurement(g.kind);
    return c;
  }

  std::string str() const {
    std::ostringstream os;
    os << "QUBITS " << num_qubits << "\n";
    for (uint32_t q = 0; q < num_qubits; ++q) {
      const WireInit& w = inits[q];
      if (w.kind == WireInit::Kind::Zero) continue;
      os << "INIT " << q << " ";
      if (w.kind == WireInit::Kind::Plus) {
        os << "+";
      } else {
        os << "L" << w.logical;
      }
      os << "\n";
    }
    for (const auto& g : gates) {
      switch (g.kind) {
        case GateKind::CNOT: os << "CNOT " << g.q0 << " " << g.q1; break;
        case GateKind::RZ: {
          std::ostringstream a;
          a.precision(17);
          a << g.angle;
          os << "RZ " << a.str() << " " << g.q0;
          break;
        }
        case GateKind::MPP: os << "MPP " << g.pauli->str(); break;
        default: os << gate_name(g.kind) << " " << g.q0; break;
      }
      os << "\n";
    }
    return os.str();
  }

  /// Parses the text format:
  ///   QUBITS n
  ///   INIT q 0|+|L<i>        (INIT lines precede all gates; default |0>)
  ///   CNOT c t | H q | S q | X q | Z q | RZ <radians> q
  ///   MX q | MZ q | MPP Z0*Z1*Z2
  /// '#' starts a comment; blank lines are ignored.
  static Circuit parse(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::optional<Circuit> c;
    bool gates_started = false;
    size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      auto hash = line.find('#');
      if (hash != std::string::npos) line = line.substr(0, hash);
      std::istringstream ls(line);
      std::string op;
      if (!(ls >> op)) continue;
      auto fail = [&](const std::string& msg) -> ParseError {
        return ParseError("line " + std::to_string(lineno) + ": " + msg);
      };
      if (op == "QUBITS") {
        if (c.has_value()) throw fail("duplicate QUBITS line");
        long n;
        if (!(ls >> n) || n < 0) throw fail("bad qubit count");
        c = Circuit(static_cast<uint32_t>(n));
        continue;
      }
      if (!c.has_value()) throw fail("QUBITS line must come first");
      if (op == "INIT") {
        if (gates_started) throw fail("INIT after gates");
        long q;
        std::string val;
        if (!(ls >> q >> val) || q < 0 || q >= c->num_qubits) throw fail("bad INIT");
        if (val == "0") {
          c->inits[q] = WireInit::zero();
        } else if (val == "+") {
          c->inits[q] = WireInit::plus();
        } else if (val.size() > 1 && val[0] == 'L') {
          unsigned long i;
          try {
            i = std::stoul(val.substr(1));
          } catch (const std::exception&) {
            throw fail("bad INIT value '" + val + "'");
          }
          c->inits[q] = WireInit::logical_input(static_cast<uint32_t>(i));
        } else {
          throw fail("bad INIT value '" + val + "'");
        }
        continue;
      }
      gates_started = true;
      try {
        if (op == "CNOT") {
          long a, b;
          if (!(ls >> a >> b) || a < 0 || b < 0) throw fail("bad CNOT operands");
          c->append(GateRecord::cnot(static_cast<uint32_t>(a), static_cast<uint32_t>(b)));
        } else if (op == "H" || op == "S" || op == "X" || op == "Z" || op == "MX" ||
                   op == "MZ") {
          long q;
          if (!(ls >> q) || q < 0) throw fail("bad operand");
          uint32_t u = static_cast<uint32_t>(q);
          if (op == "H") c->append(GateRecord::h(u));
          else if (op == "S") c->append(GateRecord::s(u));
          else if (op == "X") c->append(GateRecord::x(u));
          else if (op == "Z") c->append(GateRecord::z(u));
          else if (op == "MX") c->append(GateRecord::mx(u));
          else c->append(GateRecord::mz(u));
        } else if (op == "RZ") {
          double angle;
          long q;
          if (!(ls >> angle >> q) || q < 0) throw fail("bad RZ operands");
          c->append(GateRecord::rz(angle, static_cast<uint32_t>(q)));
        } else if (op == "MPP") {
          std::string pauli;
          if (!(ls >> pauli)) throw fail("bad MPP operand");
          c->append(GateRecord::mpp(PauliString::parse(pauli, c->num_qubits)));
        } else {
          throw fail("unknown instruction '" + op + "'");
        }
      } catch (const InvalidArgument& e) {
        throw fail(e.what());
      } catch (const ParseError& e) {
        throw fail(e.what());
      }
      std::string extra;
      if (ls >> extra) throw fail("trailing tokens '" + extra + "'");
    }
    if (!c.has_value()) throw ParseError("missing QUBITS line");
    return *c;
  }
};

}  // namespace parityq
