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
#include <cstdint>
#include <optional>
#include <random>
#include <utility>
#include <vector>

#include "parityq/circuit.hpp"
#include "parityq/code.hpp"
#include "parityq/errors.hpp"
#include "parityq/pauli.hpp"

namespace parityq {

/// One X-flip slot: position 0 is before the first gate (an input fault),
/// position g+1 is right after gate g.
struct FaultLocation {
  uint32_t position = 0;
  uint32_t qubit = 0;

  bool operator==(const FaultLocation&) const = default;
};

/// A set of fault slots plus the sampling parameters for Monte Carlo mode.
/// Exhaustive checks use one location per config with p and seed unused.
struct FaultConfig {
  std::vector<FaultLocation> locations;
  double p = 0.0;
  uint64_t seed = 0;
};

/// Conjugates a Pauli through one applied Clifford gate (P -> G P G-dag),
/// sign dropped: fault classification only reads the bit pattern.
inline void conjugate_pauli(PauliString& p, const GateRecord& g) {
  switch (g.kind) {
    case GateKind::CNOT:
      p.x.set(g.q1, p.x.get(g.q1) ^ p.x.get(g.q0));
      p.z.set(g.q0, p.z.get(g.q0) ^ p.z.get(g.q1));
      return;
    case GateKind::H: {
      bool xq = p.x.get(g.q0), zq = p.z.get(g.q0);
      p.x.set(g.q0, zq);
      p.z.set(g.q0, xq);
      return;
    }
    case GateKind::S:
      p.z.set(g.q0, p.z.get(g.q0) ^ p.x.get(g.q0));
      return;
    case GateKind::X:
    case GateKind::Z:
      return;
    default:
      throw InvalidArgument("fault propagation is defined for Clifford gates only");
  }
}

/// Every single-X-fault slot of a Clifford circuit, deterministically
/// ordered: input faults on all wires, then one fault per touched qubit
/// after each gate.
inline std::vector<FaultConfig> enumerate_single_faults(const Circuit& c) {
  if (!c.is_unitary_clifford()) {
    throw InvalidArgument("fault enumeration is defined for Clifford gates only");
  }
  std::vector<FaultConfig> out;
  for (uint32_t q = 0; q < c.num_qubits; ++q) {
    out.push_back({{FaultLocation{0, q}}, 0.0, 0});
  }
  for (uint32_t g = 0; g < c.gates.size(); ++g) {
    for (uint32_t q : c.gates[g].touched()) {
      out.push_back({{FaultLocation{g + 1, q}}, 0.0, 0});
    }
  }
  return out;
}

/// Residual Pauli at the circuit output when X flips fire at the given
/// locations: each injected X is pushed through the remaining gates by
/// conjugation.
inline PauliString propagate_fault(const Circuit& c, const FaultConfig& fault) {
  PauliString residual(c.num_qubits);
  for (const FaultLocation& loc : fault.locations) {
    if (loc.position > c.gates.size()) throw InvalidArgument("fault position out of range");
    if (loc.qubit >= c.num_qubits) throw InvalidArgument("fault qubit out of range");
  }
  for (uint32_t pos = 0; pos <= c.gates.size(); ++pos) {
    for (const FaultLocation& loc : fault.locations) {
      if (loc.position == pos) residual.x.set(loc.qubit, !residual.x.get(loc.qubit));
    }
    if (pos < c.gates.size()) conjugate_pauli(residual, c.gates[pos]);
  }
  return residual;
}

/// Exact minimum-weight X-correction lookup for a code's Z syndrome.
/// correction[s] is a qubit bitmask; ties break toward the set whose sorted
/// qubit list is lexicographically first. logical_readout[i] is the support
/// of one representative of the logical Z of index i: a qubit set whose
/// labels cancel to exactly {i}. An X pattern flips that logical iff it
/// overlaps the representative an odd number of times, which is
/// representative-independent once the pattern is syndrome-free.
struct DecoderTable {
  uint32_t n = 0;
  uint32_t k = 0;
  std::vector<uint32_t> correction;
  std::vector<bool> reachable;
  std::vector<uint32_t> logical_readout;
};

namespace detail {

/// True when mask a's sorted qubit list precedes b's lexicographically:
/// the lowest differing qubit belongs to a.
inline bool lex_before(uint32_t a, uint32_t b) {
  uint32_t diff = a ^ b;
  return diff != 0 && (a & (diff & -diff)) != 0;
}

inline uint32_t support_mask(const std::vector<uint32_t>& qubits) {
  uint32_t m = 0;
  for (uint32_t q : qubits) m |= uint32_t{1} << q;
  return m;
}

}  // namespace detail

inline DecoderTable build_decoder_table(const ClassicalParityCode& code,
                                        const std::vector<ParityLabel>& labels) {
  if (code.n > 20) throw GuardExceeded("decoder table limited to 20 qubits");
  if (labels.size() != code.n) throw InvalidArgument("label list length must equal n");
  std::vector<uint32_t> stab_masks;
  stab_masks.reserve(code.stabilizers.size());
  for (const auto& s : code.stabilizers) stab_masks.push_back(detail::support_mask(s));

  DecoderTable table;
  table.n = code.n;
  table.k = code.k;

  // Solve label_matrix^T * r_i = e_i for each logical i: row-reduce the
  // transposed label matrix with an identity bookkeeping block appended.
  BitMatrix sys(code.k, code.n + code.k);
  for (uint32_t q = 0; q < code.n; ++q) {
    for (uint32_t i : labels[q].indices()) {
      if (i >= code.k) throw InvalidArgument("logical index out of range in label");
      sys.set(i, q, true);
    }
  }
  for (uint32_t i = 0; i < code.k; ++i) sys.set(i, code.n + i, true);
  std::vector<size_t> pivots = detail::eliminate_prefix(sys, code.n);
  if (pivots.size() != code.k) {
    throw InvalidArgument("labels must span all logicals to decode against them");
  }
  table.logical_readout.assign(code.k, 0);
  for (uint32_t i = 0; i < code.k; ++i) {
    for (size_t j = 0; j < pivots.size(); ++j) {
      if (sys.get(j, code.n + i)) {
        table.logical_readout[i] |= uint32_t{1} << pivots[j];
      }
    }
  }
  size_t syndromes = size_t{1} << stab_masks.size();
  table.correction.assign(syndromes, 0);
  table.reachable.assign(syndromes, false);
  for (uint32_t err = 0; err < (uint32_t{1} << code.n); ++err) {
    size_t syn = 0;
    for (size_t s = 0; s < stab_masks.size(); ++s) {
      syn |= static_cast<size_t>(std::popcount(err & stab_masks[s]) & 1) << s;
    }
    if (!table.reachable[syn]) {
      table.reachable[syn] = true;
      table.correction[syn] = err;
      continue;
    }
    uint32_t best = table.correction[syn];
    int wd = std::popcount(err) - std::popcount(best);
    if (wd < 0 || (wd == 0 && detail::lex_before(err, best))) table.correction[syn] = err;
  }
  return table;
}

enum class FaultClass { NoError, Correctable, LogicalError };

/// Decoder verdict on one block's residual X pattern.
struct Classification {
  FaultClass kind = FaultClass::NoError;
  std::vector<uint32_t> syndrome;  // violated stabilizer indices
  uint32_t correction = 0;         // applied X-correction bitmask
  std::vector<uint32_t> flipped_logicals;
};

/// Syndrome, minimum-weight correction, and the logical flips left by
/// residual xor correction. The flip of logical i is the overlap parity of
/// the net pattern with the logical-Z readout representative. The Z part of
/// a residual is invisible to a Z-stabilizer code and ignored by design.
inline Classification classify(uint32_t residual_x, const ClassicalParityCode& code,
                               const DecoderTable& table) {
  if (table.n != code.n || table.k != code.k) {
    throw InvalidArgument("decoder table built for another code");
  }
  Classification out;
  size_t syn = 0;
  for (size_t s = 0; s < code.stabilizers.size(); ++s) {
    uint32_t mask = detail::support_mask(code.stabilizers[s]);
    if (std::popcount(residual_x & mask) & 1) {
      syn |= size_t{1} << s;
      out.syndrome.push_back(static_cast<uint32_t>(s));
    }
  }
  out.correction = table.correction[syn];
  uint32_t net = residual_x ^ out.correction;
  for (uint32_t i = 0; i < code.k; ++i) {
    if (std::popcount(net & table.logical_readout[i]) & 1) {
      out.flipped_logicals.push_back(i);
    }
  }
  if (!out.flipped_logicals.empty()) {
    out.kind = FaultClass::LogicalError;
  } else if (residual_x != 0) {
    out.kind = FaultClass::Correctable;
  }
  return out;
}

/// Labelled code blocks laid side by side on one wire register, block b
/// starting at offset(b).
struct BlockLayout {
  std::vector<ClassicalParityCode> blocks;
  std::vector<uint32_t> offsets;
  std::vector<DecoderTable> tables;

  explicit BlockLayout(std::vector<ClassicalParityCode> bs) : blocks(std::move(bs)) {
    uint32_t at = 0;
    for (const ClassicalParityCode& b : blocks) {
      if (!b.labels.has_value()) throw InvalidArgument("fault blocks must carry labels");
      offsets.push_back(at);
      at += b.n;
      tables.push_back(build_decoder_table(b, *b.labels));
    }
  }

  uint32_t total_qubits() const {
    return blocks.empty() ? 0 : offsets.back() + blocks.back().n;
  }

  /// Block-local X bitmask of a full-width residual.
  uint32_t block_mask(const PauliString& residual, size_t b) const {
    uint32_t mask = 0;
    for (uint32_t q = 0; q < blocks[b].n; ++q) {
      if (residual.x.get(offsets[b] + q)) mask |= uint32_t{1} << q;
    }
    return mask;
  }
};

/// First single fault whose residual decodes to a logical error, if any.
struct FaultCounterexample {
  FaultLocation location;
  uint32_t block = 0;
  PauliString residual;  // full register width
  Classification verdict;
};

struct FtCheckResult {
  bool pass = false;
  std::optional<FaultCounterexample> counterexample;
};

/// Exhaustive single-X-fault sweep: passes iff every fault at every slot
/// decodes to no_error or correctable on every block.
inline FtCheckResult exhaustive_ft_check(const Circuit& c, const BlockLayout& layout) {
  if (layout.total_qubits() != c.num_qubits) {
    throw InvalidArgument("block layout width must match the circuit");
  }
  for (const FaultConfig& fault : enumerate_single_faults(c)) {
    PauliString residual = propagate_fault(c, fault);
    for (size_t b = 0; b < layout.blocks.size(); ++b) {
      Classification verdict = classify(layout.block_mask(residual, b), layout.blocks[b],
                                        layout.tables[b]);
      if (verdict.kind == FaultClass::LogicalError) {
        FtCheckResult out;
        out.pass = false;
        out.counterexample = FaultCounterexample{fault.locations[0],
                                                 static_cast<uint32_t>(b), residual,
                                                 std::move(verdict)};
        return out;
      }
    }
  }
  return {true, std::nullopt};
}

/// Monte Carlo fault sampling summary. The interval is the 95% Wilson score
/// interval for the logical-error rate.
struct MonteCarloReport {
  double p = 0.0;
  uint64_t trials = 0;
  uint64_t logical_errors = 0;
  double rate = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
};

/// I.i.d. X flips with probability p at every fault slot, trials times.
/// A trial counts as a logical error when any block decodes to one.
/// Per-trial generators are seeded from (seed, trial), so results do not
/// depend on scheduling.
inline MonteCarloReport monte_carlo(const Circuit& c, const BlockLayout& layout, double p,
                                    uint64_t trials, uint64_t seed) {
  if (layout.total_qubits() != c.num_qubits) {
    throw InvalidArgument("block layout width must match the circuit");
  }
  if (!(p >= 0.0 && p <= 1.0)) throw InvalidArgument("fault probability must be in [0, 1]");
  if (trials == 0) throw InvalidArgument("need at least one trial");
  if (!c.is_unitary_clifford()) {
    throw InvalidArgument("fault propagation is defined for Clifford gates only");
  }

  MonteCarloReport rep;
  rep.p = p;
  rep.trials = trials;
  std::bernoulli_distribution flip(p);
  for (uint64_t t = 0; t < trials; ++t) {
    std::seed_seq seq{seed, t};
    std::mt19937_64 rng(seq);
    PauliString residual(c.num_qubits);
    for (uint32_t q = 0; q < c.num_qubits; ++q) {
      if (flip(rng)) residual.x.set(q, true);
    }
    for (const GateRecord& g : c.gates) {
      conjugate_pauli(residual, g);
      for (uint32_t q : g.touched()) {
        if (flip(rng)) residual.x.set(q, !residual.x.get(q));
      }
    }
    for (size_t b = 0; b < layout.blocks.size(); ++b) {
      Classification verdict = classify(layout.block_mask(residual, b), layout.blocks[b],
                                        layout.tables[b]);
      if (verdict.kind == FaultClass::LogicalError) {
        ++rep.logical_errors;
        break;
      }
    }
  }
  rep.rate = static_cast<double>(rep.logical_errors) / static_cast<double>(trials);

  const double z = 1.959963984540054;
  double n = static_cast<double>(trials), x = static_cast<double>(rep.logical_errors);
  double denom = n + z * z;
  double center = (x + z * z / 2) / denom;
  double half = z * std::sqrt(x * (n - x) / n + z * z / 4) / denom;
  rep.ci_low = std::max(0.0, center - half);
  rep.ci_high = std::min(1.0, center + half);
  return rep;
}

/// Least-squares slope of log(rate) against log(p). Points with zero rate
/// carry no information about the exponent and are skipped; fewer than two
/// usable points is an error.
inline double scaling_exponent(const std::vector<std::pair<double, double>>& points) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int m = 0;
  for (const auto& [p, rate] : points) {
    if (p <= 0.0) throw InvalidArgument("probabilities must be positive");
    if (rate <= 0.0) continue;
    double lx = std::log(p), ly = std::log(rate);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++m;
  }
  if (m < 2) throw InvalidArgument("need at least two nonzero rates to fit an exponent");
  return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

}  // namespace parityq
