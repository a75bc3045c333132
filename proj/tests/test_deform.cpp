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

#include "parityq/deform.hpp"

#include <random>

#include "catch2/catch_amalgamated.hpp"
#include "parityq/code.hpp"
#include "parityq/errors.hpp"
#include "parityq/gates.hpp"
#include "parityq/statevector.hpp"
#include "parityq/tableau.hpp"

using namespace parityq;

namespace {

/// Two labelled qubits, no stabilizers.
ClassicalParityCode two_free_qubits() {
  ClassicalParityCode code;
  code.n = 2;
  code.k = 2;
  code.labels = std::vector<ParityLabel>{ParityLabel{0}, ParityLabel{1}};
  code.validate();
  return code;
}

}  // namespace

TEST_CASE("rebasing routes all stabilizers through the linking one", "[deform]") {
  std::vector<std::vector<uint32_t>> stabs = {{0, 1, 2}, {2, 3, 4}};
  auto out = rebase_stabilizers(stabs, 2, 0);
  REQUIRE(out.size() == 2);
  CHECK(out[0] == std::vector<uint32_t>{0, 1, 2});
  CHECK(out[1] == std::vector<uint32_t>{0, 1, 3, 4});
}

TEST_CASE("rebasing leaves stabilizers without the qubit alone", "[deform]") {
  std::vector<std::vector<uint32_t>> stabs = {{0, 1}, {2, 3}, {1, 2}};
  auto out = rebase_stabilizers(stabs, 1, 0);
  CHECK(out[0] == std::vector<uint32_t>{0, 1});
  CHECK(out[1] == std::vector<uint32_t>{2, 3});
  CHECK(out[2] == std::vector<uint32_t>{0, 2});
}

TEST_CASE("rebasing validates the linking choice", "[deform]") {
  std::vector<std::vector<uint32_t>> stabs = {{0, 1}, {1, 2}};
  CHECK_THROWS_AS(rebase_stabilizers(stabs, 0, 2), InvalidArgument);
  CHECK_THROWS_AS(rebase_stabilizers(stabs, 0, 1), InvalidArgument);
}

TEST_CASE("adding a parity qubit creates the partner-XOR label", "[deform]") {
  ProtocolRun<StateVector> run(two_free_qubits(), 0, CorrectionMode::Physical,
                               OutcomeSource(3));
  DeformationStep step = run.add_parity_qubit({0, 1});
  CHECK(step.kind == DeformationStep::Kind::Add);
  CHECK(step.qubit == 2);
  CHECK(step.label == ParityLabel{0, 1});
  CHECK(step.connecting_stabilizer == std::vector<uint32_t>{0, 1, 2});
  CHECK_FALSE(step.deterministic);
  CHECK(run.code().n == 3);
  CHECK(run.code().k == 2);
  REQUIRE(run.code().stabilizers.size() == 1);
  CHECK(run.labels()[2] == ParityLabel{0, 1});
  // Whatever the outcome, the correction leaves the stabilizer at +1.
  PauliString stab = PauliString::z_on(3, {0, 1, 2});
  CHECK(run.state().expectation_pauli(stab) == Catch::Approx(1.0));
}

TEST_CASE("a forced minus outcome gets an X correction on the new qubit", "[deform]") {
  ProtocolRun<StateVector> run(two_free_qubits(), 0, CorrectionMode::Physical,
                               OutcomeSource::scripted({-1}));
  DeformationStep step = run.add_parity_qubit({0, 1});
  run.finish();
  CHECK(step.outcome == -1);
  CHECK(step.correction.axis(2) == 'X');
  CHECK(step.correction.weight() == 1);
  CHECK(run.state().expectation_pauli(PauliString::z_on(3, {0, 1, 2})) ==
        Catch::Approx(1.0));
}

TEST_CASE("a forced plus outcome needs no correction", "[deform]") {
  ProtocolRun<StateVector> run(two_free_qubits(), 0, CorrectionMode::Physical,
                               OutcomeSource::scripted({1}));
  DeformationStep step = run.add_parity_qubit({0, 1});
  run.finish();
  CHECK(step.outcome == 1);
  CHECK(step.correction.is_identity());
}

TEST_CASE("frame mode records the add correction instead of applying it", "[deform]") {
  ProtocolRun<StateVector> run(two_free_qubits(), 0, CorrectionMode::Frame,
                               OutcomeSource::scripted({-1}));
  run.add_parity_qubit({0, 1});
  run.finish();
  CHECK(run.frame().x_bit(2));
  // Raw state still shows -1; the frame flips the reading back to +1.
  PauliString stab = PauliString::z_on(3, {0, 1, 2});
  CHECK(run.state().expectation_pauli(stab) == Catch::Approx(-1.0));
  CHECK(run.frame().flips_outcome(stab));
}

TEST_CASE("add rejects malformed partner sets", "[deform]") {
  ProtocolRun<StateVector> run(two_free_qubits(), 0, CorrectionMode::Physical,
                               OutcomeSource(3));
  CHECK_THROWS_AS(run.add_parity_qubit({}), InvalidArgument);
  CHECK_THROWS_AS(run.add_parity_qubit({0, 0}), InvalidArgument);
  CHECK_THROWS_AS(run.add_parity_qubit({0, 5}), InvalidArgument);
  CHECK_THROWS_AS(run.add_parity_qubit({0, 1}, ParityLabel{0}), InvalidArgument);
  CHECK_NOTHROW(run.add_parity_qubit({0, 1}, ParityLabel{0, 1}));
}

TEST_CASE("removing a parity qubit undoes the add", "[deform]") {
  for (CorrectionMode mode : {CorrectionMode::Physical, CorrectionMode::Frame}) {
    ProtocolRun<StateVector> run(two_free_qubits(), 0, mode, OutcomeSource(9));
    run.add_parity_qubit({0, 1});
    DeformationStep step = run.remove_parity_qubit(2);
    CHECK(step.kind == DeformationStep::Kind::Remove);
    CHECK(step.qubit == 2);
    CHECK(step.label == ParityLabel{0, 1});
    CHECK(run.code().n == 2);
    CHECK(run.code().k == 2);
    CHECK(run.code().stabilizers.empty());
    CHECK(run.width() == 2);
  }
}

TEST_CASE("a minus removal outcome gets a Z correction on the linking rest",
          "[deform]") {
  // Script: add reads +1, removal reads -1.
  ProtocolRun<StateVector> run(two_free_qubits(), 0, CorrectionMode::Physical,
                               OutcomeSource::scripted({1, -1}));
  run.add_parity_qubit({0, 1});
  DeformationStep step = run.remove_parity_qubit(2);
  run.finish();
  CHECK(step.outcome == -1);
  CHECK(step.correction.axis(0) == 'Z');
  CHECK(step.correction.axis(1) == 'Z');
  CHECK(step.correction.weight() == 2);
}

TEST_CASE("add then remove is the logical identity in both modes", "[deform]") {
  std::vector<ClassicalParityCode> codes = {two_free_qubits(), repetition_code(3),
                                            lhz_layout(3)};
  std::mt19937_64 rng(21);
  for (const auto& code : codes) {
    for (CorrectionMode mode : {CorrectionMode::Physical, CorrectionMode::Frame}) {
      for (int trial = 0; trial < 4; ++trial) {
        // Random nonempty partner set.
        std::vector<uint32_t> partners;
        for (uint32_t q = 0; q < code.n; ++q) {
          if (rng() & 1) partners.push_back(q);
        }
        if (partners.empty()) partners.push_back(static_cast<uint32_t>(rng() % code.n));
        auto rep = protocol_logical_action(
            code, mode,
            [&partners](ProtocolRun<StateVector>& r) {
              DeformationStep s = r.add_parity_qubit(partners);
              r.remove_parity_qubit(s.qubit);
            },
            std::nullopt, rng());
        REQUIRE(rep.block_preserving);
        size_t dim = size_t{1} << code.k;
        Eigen::MatrixXcd eye = Eigen::MatrixXcd::Identity(dim, dim);
        CHECK(fidelity_up_to_phase(rep.logical, eye) == Catch::Approx(1.0).margin(1e-10));
        CHECK(rep.final_code.n == code.n);
      }
    }
  }
}

TEST_CASE("remove then re-add restores the code on a triangular layout", "[deform]") {
  ClassicalParityCode code = lhz_layout(3);
  auto rep = protocol_logical_action(
      code, CorrectionMode::Frame,
      [](ProtocolRun<StateVector>& r) {
        // Qubit 5 carries {0,2}; its partners 0 and 2 recreate the label.
        r.remove_parity_qubit(5);
        r.add_parity_qubit({0, 2}, ParityLabel{0, 2});
      },
      std::nullopt, 17);
  REQUIRE(rep.block_preserving);
  Eigen::MatrixXcd eye = Eigen::MatrixXcd::Identity(8, 8);
  CHECK(fidelity_up_to_phase(rep.logical, eye) == Catch::Approx(1.0).margin(1e-10));
  CHECK(rep.final_code.n == 6);
  CHECK(rep.final_code.stabilizers.size() == 3);
  rep.final_code.validate();
}

TEST_CASE("removal keeps n minus stabilizers equal to k", "[deform]") {
  ProtocolRun<StateVector> run(lhz_layout(3), 5, CorrectionMode::Physical,
                               OutcomeSource(31));
  CHECK(run.code().n == 6);
  CHECK(run.code().stabilizers.size() == 3);
  run.remove_parity_qubit(5);
  CHECK(run.code().n == 5);
  CHECK(run.code().stabilizers.size() == 2);
  CHECK(run.code().k == 3);
  run.code().validate();
  run.remove_parity_qubit(4);
  CHECK(run.code().n == 4);
  CHECK(run.code().stabilizers.size() == 1);
  run.code().validate();
  // Syndromes of the shrunk code still read +1.
  for (const SyndromeRecord& rec : run.syndrome_sweep()) {
    CHECK(rec.outcome == 1);
    CHECK(rec.deterministic);
  }
}

TEST_CASE("any linking choice yields the same logical identity", "[deform]") {
  // Qubit 4 of the k=4 layout sits in stabilizers {0,1,4} and {1,2,5}... the
  // actual memberships are computed, not assumed.
  ClassicalParityCode code = lhz_layout(4);
  std::vector<size_t> holding;
  for (size_t s = 0; s < code.stabilizers.size(); ++s) {
    const auto& sup = code.stabilizers[s];
    if (std::binary_search(sup.begin(), sup.end(), 4u)) holding.push_back(s);
  }
  REQUIRE(holding.size() >= 2);
  for (size_t linking : holding) {
    auto rep = protocol_logical_action(
        code, CorrectionMode::Physical,
        [linking](ProtocolRun<StateVector>& r) { r.remove_parity_qubit(4, linking); },
        std::nullopt, 41);
    REQUIRE(rep.block_preserving);
    Eigen::MatrixXcd eye = Eigen::MatrixXcd::Identity(16, 16);
    CHECK(fidelity_up_to_phase(rep.logical, eye) == Catch::Approx(1.0).margin(1e-10));
    rep.final_code.validate();
    CHECK(rep.final_code.n == code.n - 1);
  }
}

TEST_CASE("removing a qubit outside every stabilizer is rejected", "[deform]") {
  ProtocolRun<StateVector> run(two_free_qubits(), 0, CorrectionMode::Physical,
                               OutcomeSource(5));
  CHECK_THROWS_MATCHES(run.remove_parity_qubit(0), InvalidArgument,
                       Catch::Matchers::MessageMatches(
                           Catch::Matchers::ContainsSubstring("no stabilizer")));
}

TEST_CASE("deformation waits for outstanding ancillas", "[deform]") {
  ProtocolRun<StateVector> run(two_free_qubits(), 0, CorrectionMode::Physical,
                               OutcomeSource(5));
  uint32_t wire = run.append_ancilla(WireInit::zero());
  CHECK_THROWS_AS(run.add_parity_qubit({0, 1}), ProtocolViolation);
  CHECK_THROWS_AS(run.remove_parity_qubit(0), ProtocolViolation);
  run.discard_ancilla(wire, 'Z', 1);
  CHECK_NOTHROW(run.add_parity_qubit({0, 1}));
}

TEST_CASE("code qubits cannot leave through the ancilla door", "[deform]") {
  ProtocolRun<StateVector> run(two_free_qubits(), 0, CorrectionMode::Physical,
                               OutcomeSource(5));
  CHECK_THROWS_AS(run.discard_ancilla(0, 'Z', 1), ProtocolViolation);
}

TEST_CASE("stabilizer exclusion is a strict toggle", "[deform]") {
  ProtocolRun<StateVector> run(lhz_layout(3), 0, CorrectionMode::Physical,
                               OutcomeSource(5));
  run.exclude_stabilizer(1);
  CHECK(run.stabilizer_excluded(1));
  CHECK_THROWS_AS(run.exclude_stabilizer(1), ProtocolViolation);
  CHECK(run.syndrome_sweep().size() == 2);
  run.reactivate_stabilizer(1);
  CHECK_THROWS_AS(run.reactivate_stabilizer(1), ProtocolViolation);
  CHECK(run.syndrome_sweep().size() == 3);
}

TEST_CASE("syndrome sweeps on a fresh code state read plus one", "[deform]") {
  for (uint64_t bits : {0ull, 3ull, 7ull}) {
    ProtocolRun<StateVector> run(lhz_layout(3), bits, CorrectionMode::Physical,
                                 OutcomeSource(5));
    for (const SyndromeRecord& rec : run.syndrome_sweep()) {
      CHECK(rec.outcome == 1);
      CHECK(rec.deterministic);
    }
  }
}

TEST_CASE("frame mode sweeps read plus one through pending corrections", "[deform]") {
  // Script: add -1, a 4-stabilizer sweep, removal -1, a 3-stabilizer sweep.
  ProtocolRun<StateVector> run(lhz_layout(3), 0, CorrectionMode::Frame,
                               OutcomeSource::scripted({-1, 1, 1, 1, 1, -1, 1, 1, 1}));
  run.add_parity_qubit({3, 4});  // labels {0,1}^{1,2} = {0,2}
  for (const SyndromeRecord& rec : run.syndrome_sweep()) {
    CHECK(rec.outcome == 1);
    CHECK(rec.deterministic);
  }
  run.remove_parity_qubit(6);
  for (const SyndromeRecord& rec : run.syndrome_sweep()) {
    CHECK(rec.outcome == 1);
  }
  run.finish();
}

TEST_CASE("a recorded run replays bit for bit", "[deform]") {
  auto drive = [](ProtocolRun<StateVector>& run) {
    run.add_parity_qubit({0, 2});
    run.syndrome_sweep();
    run.measure(PauliString::single(run.width(), 0, 'X'), "probe");
    run.remove_parity_qubit(run.code().n - 1);
  };
  ProtocolRun<StateVector> rec(lhz_layout(3), 2, CorrectionMode::Frame, OutcomeSource(77));
  drive(rec);
  std::vector<int> outcomes = rec.trace().outcomes();
  REQUIRE_FALSE(outcomes.empty());

  ProtocolRun<StateVector> replay(lhz_layout(3), 2, CorrectionMode::Frame,
                                  OutcomeSource::scripted(outcomes));
  drive(replay);
  replay.finish();
  CHECK(replay.trace().outcomes() == outcomes);
  CHECK(replay.trace().events.size() == rec.trace().events.size());
}

TEST_CASE("replay scripts must match the measurement count", "[deform]") {
  ProtocolRun<StateVector> run(two_free_qubits(), 0, CorrectionMode::Physical,
                               OutcomeSource::scripted({1, 1}));
  run.add_parity_qubit({0, 1});
  CHECK_THROWS_AS(run.finish(), ProtocolViolation);

  ProtocolRun<StateVector> starved(two_free_qubits(), 0, CorrectionMode::Physical,
                                   OutcomeSource::scripted({}));
  CHECK_THROWS_AS(starved.add_parity_qubit({0, 1}), ProtocolViolation);
}

TEST_CASE("the trace keeps deformation outcomes out of the measure events",
          "[deform]") {
  ProtocolRun<StateVector> run(two_free_qubits(), 0, CorrectionMode::Physical,
                               OutcomeSource(13));
  run.add_parity_qubit({0, 1});
  run.syndrome_sweep();
  size_t deform_events = 0, measure_events = 0;
  for (const TraceEvent& e : run.trace().events) {
    if (e.kind == TraceEvent::Kind::Deform) ++deform_events;
    if (e.kind == TraceEvent::Kind::Measure) ++measure_events;
  }
  CHECK(deform_events == 1);
  CHECK(measure_events == 1);
  CHECK(run.trace().outcomes().size() == 2);
}

TEST_CASE("deformation works the same on the stabilizer backend", "[deform]") {
  ProtocolRun<StabilizerTableau> run(lhz_layout(3), 6, CorrectionMode::Frame,
                                     OutcomeSource(19));
  DeformationStep add = run.add_parity_qubit({3, 5});
  CHECK(add.label == (ParityLabel{0, 1} ^ ParityLabel{0, 2}));
  for (const SyndromeRecord& rec : run.syndrome_sweep()) {
    CHECK(rec.outcome == 1);
    CHECK(rec.deterministic);
  }
  run.remove_parity_qubit(add.qubit);
  CHECK(run.code().n == 6);
  CHECK(run.state().check_invariants());
  CHECK((in_code_space(run.state(), run.code()).pass || !run.frame().empty()));
  run.flush_frame();
  CHECK(in_code_space(run.state(), run.code()).pass);
}

TEST_CASE("logical readout survives a full deformation cycle", "[deform]") {
  // Prepare b=5 (logicals 0 and 2 set), deform, then read logical Zs from
  // label-carrying qubits.
  ProtocolRun<StabilizerTableau> run(lhz_layout(3), 5, CorrectionMode::Physical,
                                     OutcomeSource(23));
  run.add_parity_qubit({0, 1});
  run.remove_parity_qubit(run.code().n - 1);
  auto z0 = run.state().deterministic_expectation(PauliString::single(6, 0, 'Z'));
  auto z1 = run.state().deterministic_expectation(PauliString::single(6, 1, 'Z'));
  auto z2 = run.state().deterministic_expectation(PauliString::single(6, 2, 'Z'));
  REQUIRE(z0.has_value());
  REQUIRE(z1.has_value());
  REQUIRE(z2.has_value());
  CHECK(*z0 == -1);
  CHECK(*z1 == 1);
  CHECK(*z2 == -1);
}
