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

#include "parityq/flow.hpp"

#include <random>

#include "catch2/catch_amalgamated.hpp"
#include "parityq/circuit.hpp"
#include "parityq/code.hpp"
#include "parityq/pauli.hpp"

using namespace parityq;

namespace {

Circuit random_clifford(uint32_t n, size_t depth, std::mt19937_64& rng) {
  Circuit c(n);
  for (size_t i = 0; i < depth; ++i) {
    switch (rng() % 5) {
      case 0: {
        uint32_t a = rng() % n, b = rng() % n;
        if (a == b) b = (b + 1) % n;
        if (n >= 2) c.append(GateRecord::cnot(a, b));
        break;
      }
      case 1: c.append(GateRecord::h(rng() % n)); break;
      case 2: c.append(GateRecord::s(rng() % n)); break;
      case 3: c.append(GateRecord::x(rng() % n)); break;
      default: c.append(GateRecord::z(rng() % n)); break;
    }
  }
  return c;
}

PauliString random_pauli(uint32_t n, std::mt19937_64& rng) {
  PauliString p(n);
  for (uint32_t q = 0; q < n; ++q) {
    p.x.set(q, rng() & 1);
    p.z.set(q, rng() & 1);
  }
  p.negative = rng() & 1;
  return p;
}

}  // namespace

TEST_CASE("pauli products track signs mod four", "[flow]") {
  PauliString x = PauliString::single(1, 0, 'X');
  PauliString z = PauliString::single(1, 0, 'Z');
  CHECK(!x.commutes_with(z));
  CHECK_THROWS_AS(x.multiply_by(z), InvalidArgument);

  // (X X) = I, (Y Y) = I, and XZ * ZX = -I * ... exercised via commuting pairs:
  PauliString xy = PauliString::parse("X0*Y1", 2);
  PauliString yx = PauliString::parse("Y0*X1", 2);
  CHECK(xy.commutes_with(yx));
  PauliString prod = xy;
  prod.multiply_by(yx);  // (X*Y)(Y*X) on each qubit: iZ * -iZ = Z*Z ... sign +
  CHECK(prod == PauliString::parse("Z0*Z1", 2));

  // Opposite phases cancel: (Y*Z)(Z*Y) per qubit gives (+i)(-i) = +1.
  PauliString yz = PauliString::parse("Y0*Z1", 2);
  PauliString zy = PauliString::parse("Z0*Y1", 2);
  PauliString p2 = yz;
  p2.multiply_by(zy);
  CHECK(p2 == PauliString::parse("X0*X1", 2));

  // Equal phases add to -1: (Y*Y)(Z*Z) per qubit gives (+i)(+i) = -1.
  PauliString yy = PauliString::parse("Y0*Y1", 2);
  PauliString p3 = yy;
  p3.multiply_by(PauliString::parse("Z0*Z1", 2));
  CHECK(p3 == PauliString::parse("-X0*X1", 2));
}

TEST_CASE("pauli text round trip", "[flow]") {
  for (const char* s : {"I", "-I", "X0", "-Z2", "X0*Z3*Y5", "-Y1*Y2"}) {
    PauliString p = PauliString::parse(s, 6);
    std::string noplus = s;
    CHECK(PauliString::parse(p.str(), 6) == p);
  }
  CHECK(PauliString::parse("Z0*Z1*Z2", 3).str() == "Z0*Z1*Z2");
  CHECK_THROWS_AS(PauliString::parse("Q0", 2), ParseError);
  CHECK_THROWS_AS(PauliString::parse("X0*X0", 2), ParseError);
  CHECK_THROWS_AS(PauliString::parse("X5", 2), ParseError);
}

TEST_CASE("a CNOT pulls target Z back onto the control", "[flow]") {
  Circuit c(2);
  c.append(GateRecord::cnot(0, 1));
  PauliString back = conjugate_pauli(c, PauliString::single(2, 1, 'Z'),
                                     ConjugationDirection::Inverse);
  CHECK(back == PauliString::parse("Z0*Z1", 2));
  // Control Z is untouched.
  CHECK(conjugate_pauli(c, PauliString::single(2, 0, 'Z'),
                        ConjugationDirection::Inverse) ==
        PauliString::single(2, 0, 'Z'));
}

TEST_CASE("an X error on the control copies onto the target", "[flow]") {
  Circuit c(2);
  c.append(GateRecord::cnot(0, 1));
  PauliString fwd = conjugate_pauli(c, PauliString::single(2, 0, 'X'),
                                    ConjugationDirection::Forward);
  CHECK(fwd == PauliString::parse("X0*X1", 2));
}

TEST_CASE("phase gate conjugation carries the sign", "[flow]") {
  Circuit c(1);
  c.append(GateRecord::s(0));
  CHECK(conjugate_pauli(c, PauliString::parse("X0", 1), ConjugationDirection::Forward) ==
        PauliString::parse("Y0", 1));
  CHECK(conjugate_pauli(c, PauliString::parse("Y0", 1), ConjugationDirection::Forward) ==
        PauliString::parse("-X0", 1));
  CHECK(conjugate_pauli(c, PauliString::parse("X0", 1), ConjugationDirection::Inverse) ==
        PauliString::parse("-Y0", 1));
  CHECK(conjugate_pauli(c, PauliString::parse("Y0", 1), ConjugationDirection::Inverse) ==
        PauliString::parse("X0", 1));
}

TEST_CASE("conjugation rejects non-Clifford circuits", "[flow]") {
  Circuit c(1);
  c.append(GateRecord::rz(0.3, 0));
  CHECK_THROWS_AS(
      conjugate_pauli(c, PauliString::single(1, 0, 'X'), ConjugationDirection::Forward),
      InvalidArgument);
  Circuit m(1);
  m.append(GateRecord::mz(0));
  CHECK_THROWS_AS(
      conjugate_pauli(m, PauliString::single(1, 0, 'X'), ConjugationDirection::Forward),
      InvalidArgument);
}

TEST_CASE("conjugation preserves commutation and inverts exactly", "[flow]") {
  std::mt19937_64 rng(31);
  for (int it = 0; it < 100; ++it) {
    uint32_t n = 2 + rng() % 5;
    Circuit c = random_clifford(n, 3 + rng() % 20, rng);
    PauliString p = random_pauli(n, rng);
    PauliString q = random_pauli(n, rng);
    PauliString pf = conjugate_pauli(c, p, ConjugationDirection::Forward);
    PauliString qf = conjugate_pauli(c, q, ConjugationDirection::Forward);
    CHECK(p.commutes_with(q) == pf.commutes_with(qf));
    CHECK(conjugate_pauli(c, pf, ConjugationDirection::Inverse) == p);
    CHECK(conjugate_pauli(c, conjugate_pauli(c, p, ConjugationDirection::Inverse),
                          ConjugationDirection::Forward) == p);
  }
}

TEST_CASE("labels read off a two-CNOT parity encoder", "[flow]") {
  Circuit c(3);
  c.inits[0] = WireInit::logical_input(0);
  c.inits[1] = WireInit::logical_input(1);
  c.append(GateRecord::cnot(0, 2));
  c.append(GateRecord::cnot(1, 2));
  LabelAssignment a = labels_from_encoding_circuit(c);
  CHECK(a.labels == std::vector<ParityLabel>{{0}, {1}, {0, 1}});
  REQUIRE(a.seeds.has_value());
  CHECK(*a.seeds == std::vector<uint32_t>{0, 1});
}

TEST_CASE("a gate-free circuit is the identity encoder", "[flow]") {
  Circuit c(2);
  c.inits[0] = WireInit::logical_input(0);
  c.inits[1] = WireInit::logical_input(1);
  LabelAssignment a = labels_from_encoding_circuit(c);
  CHECK(a.labels == std::vector<ParityLabel>{{0}, {1}});
}

TEST_CASE("non-parity encoders are rejected", "[flow]") {
  Circuit c(2);
  c.inits[0] = WireInit::logical_input(0);
  c.append(GateRecord::h(1));
  c.append(GateRecord::cnot(1, 0));
  CHECK_THROWS_AS(labels_from_encoding_circuit(c), InvalidArgument);

  Circuit with_plus(2);
  with_plus.inits[0] = WireInit::logical_input(0);
  with_plus.inits[1] = WireInit::plus();
  CHECK_THROWS_AS(labels_from_encoding_circuit(with_plus), InvalidArgument);

  Circuit with_x(2);
  with_x.inits[0] = WireInit::logical_input(0);
  with_x.append(GateRecord::x(1));
  CHECK_THROWS_AS(labels_from_encoding_circuit(with_x), InvalidArgument);

  Circuit dup(2);
  dup.inits[0] = WireInit::logical_input(0);
  dup.inits[1] = WireInit::logical_input(0);
  CHECK_THROWS_AS(labels_from_encoding_circuit(dup), InvalidArgument);
}

TEST_CASE("canonical encoder fans out each label from its seed", "[flow]") {
  ClassicalParityCode code = lhz_layout(3);
  auto derived = derive_labels(code, {{0, 0}, {1, 1}, {2, 2}});
  Circuit enc = canonical_encoder(code, derived.assignment);
  CHECK(enc.gates.size() == 6);  // three pair qubits, two CNOTs each
  CHECK(labels_from_encoding_circuit(enc).labels == derived.assignment.labels);
}

TEST_CASE("encoders map ancilla Zs into the stabilizer group", "[flow]") {
  for (uint32_t k = 2; k <= 5; ++k) {
    ClassicalParityCode code = lhz_layout(k);
    LabelAssignment a{*code.labels, find_seeds(*code.labels, code.k)};
    Circuit enc = canonical_encoder(code, a);
    BitMatrix stab = code.stabilizer_matrix();
    for (uint32_t w = 0; w < code.n; ++w) {
      if (enc.inits[w].kind != WireInit::Kind::Zero) continue;
      PauliString fwd = conjugate_pauli(enc, PauliString::single(code.n, w, 'Z'),
                                        ConjugationDirection::Forward);
      CHECK(!fwd.x.any());
      CHECK(!fwd.negative);
      // Membership in the row space of the stabilizer matrix.
      BitMatrix stacked = stab;
      stacked.append_row(fwd.z);
      CHECK(stacked.rank() == stab.rank());
    }
  }
}

TEST_CASE("encoder round trip over mixed code families", "[flow]") {
  std::vector<ClassicalParityCode> codes{lhz_layout(2), lhz_layout(4), repetition_code(4),
                                         disjoint_union(repetition_code(2), lhz_layout(3))};
  for (const auto& code : codes) {
    LabelAssignment a{*code.labels, find_seeds(*code.labels, code.k)};
    REQUIRE(a.seeds.has_value());
    Circuit enc = canonical_encoder(code, a);
    LabelAssignment back = labels_from_encoding_circuit(enc);
    CHECK(back.labels == a.labels);
    CHECK(back.seeds == a.seeds);
  }
}

TEST_CASE("circuit text round trips", "[flow]") {
  Circuit c(3);
  c.inits[0] = WireInit::logical_input(0);
  c.inits[1] = WireInit::logical_input(1);
  c.append(GateRecord::cnot(0, 2));
  c.append(GateRecord::cnot(1, 2));
  c.append(GateRecord::rz(0.3, 2));
  c.append(GateRecord::mpp(PauliString::parse("Z0*Z1*Z2", 3)));
  Circuit back = Circuit::parse(c.str());
  CHECK(back == c);
}

TEST_CASE("circuit parser accepts the documented grammar", "[flow]") {
  Circuit c = Circuit::parse(
      "QUBITS 3\n"
      "INIT 0 L0\n"
      "INIT 1 +\n"
      "# comment\n"
      "CNOT 0 2\n"
      "H 1\n"
      "S 1\n"
      "X 2\n"
      "Z 0\n"
      "RZ 0.25 2\n"
      "MX 1\n"
      "MZ 2\n"
      "MPP Z0*Z2\n");
  CHECK(c.num_qubits == 3);
  CHECK(c.inits[0] == WireInit::logical_input(0));
  CHECK(c.inits[1] == WireInit::plus());
  CHECK(c.inits[2] == WireInit::zero());
  REQUIRE(c.gates.size() == 9);
  CHECK(c.gates[5] == GateRecord::rz(0.25, 2));
  CHECK(c.count_measurements() == 3);
}

TEST_CASE("circuit parser reports line numbers on errors", "[flow]") {
  using Catch::Matchers::ContainsSubstring;
  CHECK_THROWS_MATCHES(Circuit::parse("CNOT 0 1\n"), ParseError,
                       Catch::Matchers::MessageMatches(ContainsSubstring("QUBITS")));
  CHECK_THROWS_MATCHES(Circuit::parse("QUBITS 2\nCNOT 0 1\nINIT 0 +\n"), ParseError,
                       Catch::Matchers::MessageMatches(ContainsSubstring("line 3")));
  CHECK_THROWS_AS(Circuit::parse("QUBITS 2\nCNOT 0 0\n"), ParseError);
  CHECK_THROWS_AS(Circuit::parse("QUBITS 2\nFLIP 0\n"), ParseError);
  CHECK_THROWS_AS(Circuit::parse("QUBITS 2\nCNOT 0 5\n"), ParseError);
  CHECK_THROWS_AS(Circuit::parse("QUBITS 2\nMPP X0*X9\n"), ParseError);
}

TEST_CASE("touched qubits per operation", "[flow]") {
  CHECK(GateRecord::cnot(3, 1).touched() == std::vector<uint32_t>{1, 3});
  CHECK(GateRecord::h(2).touched() == std::vector<uint32_t>{2});
  CHECK(GateRecord::mpp(PauliString::parse("Z0*Z4", 5)).touched() ==
        std::vector<uint32_t>{0, 4});
}
