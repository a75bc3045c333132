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
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "parityq/circuit.hpp"
#include "parityq/code.hpp"
#include "parityq/errors.hpp"
#include "parityq/faults.hpp"
#include "parityq/frame.hpp"
#include "parityq/pauli.hpp"
#include "parityq/statevector.hpp"
#include "parityq/tableau.hpp"

namespace parityq {

/// Ranges for the random code generator. Generated codes have pairwise
/// distinct, nonempty labels, so every parity qubit needs a stabilizer of
/// weight at least 3 and at most 2^k - 1 distinct labels exist.
struct CodeGeneratorSpec {
  uint32_t n_min = 3;
  uint32_t n_max = 8;
  uint32_t k_min = 1;
  uint32_t k_max = 4;
  uint32_t max_stabilizer_weight = 4;
  uint64_t seed = 0;
};

struct GeneratedCode {
  ClassicalParityCode code;
  LabelAssignment assignment;
};

namespace detail {

/// Whether a single (n, k) pair admits a code under the weight cap and the
/// distinct-label rule.
inline bool generator_pair_feasible(uint32_t n, uint32_t k, uint32_t max_weight) {
  if (k < 1 || k > n) return false;
  if (n == k) return true;
  // A weight-w stabilizer makes the new label the symmetric difference of
  // w - 1 existing ones; w <= 2 can only produce empty or duplicate labels.
  if (max_weight < 3) return false;
  if (k < 31 && n > (1u << k) - 1) return false;
  return true;
}

}  // namespace detail

/// Draws a labelled code: base qubits {0}..{k-1} first, then parity qubits
/// whose label is the symmetric difference of 2..w-1 earlier labels, each
/// introduced by one stabilizer; finally a random qubit permutation. The
/// result is post-checked with validate() and validate_labels().
inline GeneratedCode random_code(const CodeGeneratorSpec& spec, std::mt19937_64& rng) {
  if (spec.n_min < 1 || spec.n_min > spec.n_max) {
    throw InvalidArgument("qubit count range is empty");
  }
  if (spec.k_min < 1 || spec.k_min > spec.k_max) {
    throw InvalidArgument("logical count range is empty");
  }
  std::vector<std::pair<uint32_t, uint32_t>> feasible;
  for (uint32_t n = spec.n_min; n <= spec.n_max; ++n) {
    for (uint32_t k = spec.k_min; k <= spec.k_max; ++k) {
      if (detail::generator_pair_feasible(n, k, spec.max_stabilizer_weight)) {
        feasible.emplace_back(n, k);
      }
    }
  }
  if (feasible.empty()) {
    throw InfeasibleSpec(
        "no (n, k) in range fits the stabilizer weight cap with distinct labels");
  }

  constexpr int kDraws = 64;
  for (int attempt = 0; attempt < kDraws; ++attempt) {
    auto [n, k] =
        feasible[std::uniform_int_distribution<size_t>(0, feasible.size() - 1)(rng)];
    std::vector<ParityLabel> labels;
    labels.reserve(n);
    for (uint32_t i = 0; i < k; ++i) labels.push_back(ParityLabel({i}));
    std::vector<std::vector<uint32_t>> stabilizers;
    bool ok = true;
    for (uint32_t q = k; q < n && ok; ++q) {
      bool placed = false;
      for (int tries = 0; tries < 64 && !placed; ++tries) {
        uint32_t cap = std::min<uint32_t>(spec.max_stabilizer_weight - 1, q);
        uint32_t t = std::uniform_int_distribution<uint32_t>(2, cap)(rng);
        std::vector<uint32_t> pool(q);
        std::iota(pool.begin(), pool.end(), 0u);
        std::shuffle(pool.begin(), pool.end(), rng);
        pool.resize(t);
        ParityLabel candidate;
        for (uint32_t m : pool) candidate ^= labels[m];
        if (candidate.empty()) continue;
        if (std::find(labels.begin(), labels.end(), candidate) != labels.end()) continue;
        labels.push_back(candidate);
        pool.push_back(q);
        std::sort(pool.begin(), pool.end());
        stabilizers.push_back(std::move(pool));
        placed = true;
      }
      ok = placed;
    }
    if (!ok) continue;

    // Random relabelling of the wires.
    std::vector<uint32_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0u);
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<ParityLabel> shuffled(n);
    for (uint32_t q = 0; q < n; ++q) shuffled[perm[q]] = labels[q];
    for (auto& s : stabilizers) {
      for (uint32_t& q : s) q = perm[q];
      std::sort(s.begin(), s.end());
    }

    ClassicalParityCode code;
    code.n = n;
    code.k = k;
    code.stabilizers = std::move(stabilizers);
    code.labels = shuffled;
    code.validate();
    LabelValidation check = validate_labels(code, shuffled);
    if (!check.pass) continue;
    return GeneratedCode{std::move(code),
                         LabelAssignment{shuffled, find_seeds(shuffled, k)}};
  }
  throw InfeasibleSpec("code generation did not converge within the retry budget");
}

inline GeneratedCode random_code(const CodeGeneratorSpec& spec) {
  std::mt19937_64 rng(spec.seed);
  return random_code(spec, rng);
}

/// Shape of a random Clifford circuit. measure_fraction is the chance each
/// slot is a measurement instead of a unitary gate; zero keeps the circuit
/// unitary.
struct CircuitGeneratorSpec {
  uint32_t num_qubits = 4;
  uint32_t num_gates = 24;
  double measure_fraction = 0.0;
  bool allow_mpp = true;
  uint64_t seed = 0;
};

/// Draws a circuit over {CNOT, H, S, X, Z} with random |0>/|+> wire
/// initializations and optional MZ/MX/MPP measurements.
inline Circuit random_clifford_circuit(const CircuitGeneratorSpec& spec,
                                       std::mt19937_64& rng) {
  if (spec.num_qubits < 1) throw InvalidArgument("circuit needs at least one qubit");
  if (!(spec.measure_fraction >= 0.0 && spec.measure_fraction <= 1.0)) {
    throw InvalidArgument("measure_fraction must lie in [0, 1]");
  }
  const uint32_t n = spec.num_qubits;
  Circuit c;
  c.num_qubits = n;
  std::bernoulli_distribution plus(0.5);
  for (uint32_t q = 0; q < n; ++q) {
    c.inits.push_back(plus(rng) ? WireInit::plus() : WireInit::zero());
  }
  std::uniform_int_distribution<uint32_t> wire(0, n - 1);
  std::bernoulli_distribution measure(spec.measure_fraction);
  for (uint32_t g = 0; g < spec.num_gates; ++g) {
    if (spec.measure_fraction > 0.0 && measure(rng)) {
      int kind = std::uniform_int_distribution<int>(0, spec.allow_mpp ? 2 : 1)(rng);
      if (kind == 0) {
        c.append(GateRecord::mz(wire(rng)));
      } else if (kind == 1) {
        c.append(GateRecord::mx(wire(rng)));
      } else {
        uint32_t support = std::uniform_int_distribution<uint32_t>(
            1, std::min<uint32_t>(3, n))(rng);
        std::vector<uint32_t> pool(n);
        std::iota(pool.begin(), pool.end(), 0u);
        std::shuffle(pool.begin(), pool.end(), rng);
        PauliString p(n);
        const char axes[3] = {'X', 'Y', 'Z'};
        for (uint32_t i = 0; i < support; ++i) {
          p.set_axis(pool[i], axes[std::uniform_int_distribution<int>(0, 2)(rng)]);
        }
        c.append(GateRecord::mpp(p));
      }
      continue;
    }
    int kind = std::uniform_int_distribution<int>(0, n >= 2 ? 5 : 3)(rng);
    switch (kind) {
      case 0:
        c.append(GateRecord::h(wire(rng)));
        break;
      case 1:
        c.append(GateRecord::s(wire(rng)));
        break;
      case 2:
        c.append(GateRecord::x(wire(rng)));
        break;
      case 3:
        c.append(GateRecord::z(wire(rng)));
        break;
      default: {
        uint32_t a = wire(rng);
        uint32_t b = wire(rng);
        while (b == a) b = wire(rng);
        // Two slots in the distribution so two-qubit gates stay common.
        c.append(GateRecord::cnot(a, b));
        break;
      }
    }
  }
  return c;
}

inline Circuit random_clifford_circuit(const CircuitGeneratorSpec& spec) {
  std::mt19937_64 rng(spec.seed);
  return random_clifford_circuit(spec, rng);
}

/// Verdict of a cross-backend comparison.
struct BackendAgreement {
  bool pass = true;
  uint64_t trials = 0;
  /// Measurement slots compared (0 means the circuits were compared by
  /// final stabilizer expectations instead).
  size_t slots = 0;
  /// Largest per-slot z statistic observed.
  double max_z = 0.0;
  std::optional<size_t> worst_slot;
  std::string detail;
};

namespace detail {

inline void require_backend_runnable(const Circuit& c) {
  if (c.num_qubits > 8) {
    throw GuardExceeded("cross-backend check limited to 8 qubits");
  }
  for (const GateRecord& g : c.gates) {
    switch (g.kind) {
      case GateKind::CNOT:
      case GateKind::H:
      case GateKind::S:
      case GateKind::X:
      case GateKind::Z:
      case GateKind::MX:
      case GateKind::MZ:
      case GateKind::MPP:
        break;
      default:
        throw InvalidArgument("cross-backend check needs a Clifford circuit");
    }
  }
  for (const WireInit& w : c.inits) {
    if (w.kind == WireInit::Kind::Logical) {
      throw InvalidArgument("cross-backend check needs |0> or |+> wires");
    }
  }
}

template <class State>
std::vector<std::vector<MeasureResult>> sample_circuit(const Circuit& c, uint64_t trials,
                                                       uint64_t seed, uint64_t stream) {
  std::vector<std::vector<MeasureResult>> out;
  out.reserve(trials);
  for (uint64_t t = 0; t < trials; ++t) {
    std::seed_seq sseq{seed, stream, t};
    std::mt19937_64 rng(sseq);
    OutcomeSource src(rng());
    State st = state_from_inits<State>(c);
    out.push_back(run_circuit(st, c, src));
  }
  return out;
}

}  // namespace detail

/// Compares measurement statistics of two circuits, one run on the tableau
/// backend and one on the state vector, with a pooled two-proportion z test
/// per slot and a structural check that per-slot determinism flags agree.
/// Feeding the same circuit twice checks backend agreement; feeding a
/// deliberately perturbed copy on one side checks harness sensitivity.
inline BackendAgreement cross_backend_compare(const Circuit& tableau_side,
                                              const Circuit& statevector_side,
                                              uint64_t trials, uint64_t seed,
                                              double sigma = 3.0) {
  detail::require_backend_runnable(tableau_side);
  detail::require_backend_runnable(statevector_side);
  if (trials < 1) throw InvalidArgument("trials must be positive");
  if (!(sigma > 0.0)) throw InvalidArgument("sigma must be positive");

  BackendAgreement out;
  out.trials = trials;

  size_t slots_t = 0;
  size_t slots_v = 0;
  for (const GateRecord& g : tableau_side.gates) slots_t += is_measurement(g.kind);
  for (const GateRecord& g : statevector_side.gates) slots_v += is_measurement(g.kind);
  if (slots_t != slots_v) {
    out.pass = false;
    out.detail = "measurement slot counts differ";
    return out;
  }
  out.slots = slots_t;

  if (out.slots == 0) {
    // No statistics to compare: check the state vector is stabilized by the
    // tableau's canonical generators with matching signs.
    std::mt19937_64 rng(seed);
    OutcomeSource src(rng());
    StabilizerTableau tab = state_from_inits<StabilizerTableau>(tableau_side);
    run_circuit(tab, tableau_side, src);
    StateVector sv = state_from_inits<StateVector>(statevector_side);
    run_circuit(sv, statevector_side, src);
    if (tableau_side.num_qubits != statevector_side.num_qubits) {
      out.pass = false;
      out.detail = "circuit widths differ";
      return out;
    }
    for (const PauliString& g : tab.canonical_generators()) {
      double e = sv.expectation_pauli(g);
      if (std::abs(e - 1.0) > 1e-9) {
        out.pass = false;
        out.detail = "state is not stabilized by " + g.str();
        return out;
      }
    }
    return out;
  }

  auto samples_t = detail::sample_circuit<StabilizerTableau>(tableau_side, trials, seed, 0);
  auto samples_v = detail::sample_circuit<StateVector>(statevector_side, trials, seed, 1);

  for (size_t s = 0; s < out.slots; ++s) {
    uint64_t plus_t = 0;
    uint64_t plus_v = 0;
    bool det_t = samples_t[0][s].deterministic;
    bool det_v = samples_v[0][s].deterministic;
    for (uint64_t t = 0; t < trials; ++t) {
      plus_t += samples_t[t][s].outcome > 0;
      plus_v += samples_v[t][s].outcome > 0;
      if (samples_t[t][s].deterministic != det_t ||
          samples_v[t][s].deterministic != det_v) {
        out.pass = false;
        out.worst_slot = s;
        out.detail = "determinism flag is not stable across trials";
        return out;
      }
    }
    if (det_t != det_v) {
      out.pass = false;
      out.worst_slot = s;
      out.detail = "backends disagree on determinism";
      return out;
    }
    double p1 = static_cast<double>(plus_t) / static_cast<double>(trials);
    double p2 = static_cast<double>(plus_v) / static_cast<double>(trials);
    double pooled = (static_cast<double>(plus_t) + static_cast<double>(plus_v)) /
                    (2.0 * static_cast<double>(trials));
    double z = 0.0;
    if (pooled > 0.0 && pooled < 1.0) {
      z = std::abs(p1 - p2) /
          std::sqrt(pooled * (1.0 - pooled) * 2.0 / static_cast<double>(trials));
    }
    if (z > out.max_z) {
      out.max_z = z;
      out.worst_slot = s;
    }
  }
  if (out.max_z > sigma) {
    out.pass = false;
    out.detail = "slot statistics differ beyond the sigma bound";
  }
  return out;
}

/// Runs the same circuit on both backends and compares.
inline BackendAgreement cross_backend_check(const Circuit& c, uint64_t trials,
                                            uint64_t seed, double sigma = 3.0) {
  return cross_backend_compare(c, c, trials, seed, sigma);
}

}  // namespace parityq
