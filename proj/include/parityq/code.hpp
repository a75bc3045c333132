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
#include <array>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "parityq/errors.hpp"
#include "parityq/gf2.hpp"

namespace parityq {

/// Sorted set of logical indices. A physical qubit labelled {i, j, ...}
/// carries the joint Z-parity of those logical qubits: measuring Z on it
/// reads out the product of the corresponding logical Z operators. Labels
/// compose under symmetric difference.
class ParityLabel {
 public:
  ParityLabel() = default;

  ParityLabel(std::initializer_list<uint32_t> idx) : idx_(idx) { normalize(); }

  explicit ParityLabel(std::vector<uint32_t> idx) : idx_(std::move(idx)) { normalize(); }

  static ParityLabel singleton(uint32_t i) { return ParityLabel({i}); }

  const std::vector<uint32_t>& indices() const { return idx_; }
  size_t size() const { return idx_.size(); }
  bool empty() const { return idx_.empty(); }

  bool contains(uint32_t i) const {
    return std::binary_search(idx_.begin(), idx_.end(), i);
  }

  /// Symmetric difference: the label of a product of Z operators.
  friend ParityLabel operator^(const ParityLabel& a, const ParityLabel& b) {
    ParityLabel out;
    std::set_symmetric_difference(a.idx_.begin(), a.idx_.end(), b.idx_.begin(),
                                  b.idx_.end(), std::back_inserter(out.idx_));
    return out;
  }

  ParityLabel& operator^=(const ParityLabel& o) {
    *this = *this ^ o;
    return *this;
  }

  bool operator==(const ParityLabel&) const = default;
  auto operator<=>(const ParityLabel&) const = default;

  /// Indicator over k logicals.
  BitVector to_mask(size_t k) const {
    BitVector v(k);
    for (uint32_t i : idx_) {
      if (i >= k) throw InvalidArgument("logical index out of range");
      v.set(i, true);
    }
    return v;
  }

  std::string str() const {
    std::string s = "{";
    for (size_t i = 0; i < idx_.size(); ++i) {
      if (i) s += ",";
      s += std::to_string(idx_[i]);
    }
    return s + "}";
  }

 private:
  void normalize() {
    std::sort(idx_.begin(), idx_.end());
    if (std::adjacent_find(idx_.begin(), idx_.end()) != idx_.end()) {
      throw InvalidArgument("duplicate logical index in label");
    }
  }

  std::vector<uint32_t> idx_;
};

/// A classical parity code: n physical qubits, k logical qubits, and a list
/// of independent Z-type stabilizers given by their qubit supports.
/// Invariant: n - stabilizers.size() == k and the stabilizer supports are
/// linearly independent over GF(2).
struct ClassicalParityCode {
  uint32_t n = 0;
  uint32_t k = 0;
  std::vector<std::vector<uint32_t>> stabilizers;
  std::optional<std::vector<ParityLabel>> labels;
  std::optional<std::vector<std::array<int, 2>>> coords;

  /// Stabilizer supports as rows of an s x n indicator matrix.
  BitMatrix stabilizer_matrix() const {
    BitMatrix m(stabilizers.size(), n);
    for (size_t r = 0; r < stabilizers.size(); ++r) {
      for (uint32_t q : stabilizers[r]) {
        if (q >= n) throw InvalidArgument("stabilizer qubit out of range");
        m.set(r, q, true);
      }
    }
    return m;
  }

  /// Throws InvalidArgument if the structural invariants are violated.
  void validate() const {
    if (n == 0) throw InvalidArgument("code must have at least one qubit");
    if (stabilizers.size() + k != n) {
      throw InvalidArgument("qubit count minus stabilizer count must equal k");
    }
    for (const auto& s : stabilizers) {
      if (s.empty()) throw InvalidArgument("empty stabilizer support");
      std::vector<uint32_t> sorted = s;
      std::sort(sorted.begin(), sorted.end());
      if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
        throw InvalidArgument("duplicate qubit in stabilizer support");
      }
      if (sorted != s) throw InvalidArgument("stabilizer support must be sorted");
    }
    BitMatrix m = stabilizer_matrix();
    if (m.rank() != stabilizers.size()) {
      throw InvalidArgument("stabilizer supports are linearly dependent");
    }
    if (labels.has_value() && labels->size() != n) {
      throw InvalidArgument("label list length must equal qubit count");
    }
    if (coords.has_value() && coords->size() != n) {
      throw InvalidArgument("coordinate list length must equal qubit count");
    }
  }
};

/// Labels for every qubit plus, when they exist, one designated seed qubit
/// per logical index carrying the singleton label {i}.
struct LabelAssignment {
  std::vector<ParityLabel> labels;
  /// seeds[i] = qubit whose label is exactly {i}; absent when some logical
  /// has no singleton carrier (possible after deformations).
  std::optional<std::vector<uint32_t>> seeds;

  /// Label matrix: row per qubit, column per logical.
  BitMatrix matrix(uint32_t k) const {
    BitMatrix m(labels.size(), k);
    for (size_t q = 0; q < labels.size(); ++q) {
      for (uint32_t i : labels[q].indices()) {
        if (i >= k) throw InvalidArgument("logical index out of range in label");
        m.set(q, i, true);
      }
    }
    return m;
  }
};

/// Recomputes the seed list from the labels: first qubit carrying each
/// singleton; nullopt if any logical lacks one.
inline std::optional<std::vector<uint32_t>> find_seeds(
    const std::vector<ParityLabel>& labels, uint32_t k) {
  std::vector<uint32_t> seeds(k, 0);
  std::vector<bool> found(k, false);
  for (uint32_t q = 0; q < labels.size(); ++q) {
    if (labels[q].size() == 1) {
      uint32_t i = labels[q].indices()[0];
      if (i < k && !found[i]) {
        seeds[i] = q;
        found[i] = true;
      }
    }
  }
  for (uint32_t i = 0; i < k; ++i) {
    if (!found[i]) return std::nullopt;
  }
  return seeds;
}

struct LabelValidation {
  bool pass = false;
  /// Stabilizers whose label symmetric difference is nonzero.
  std::vector<uint32_t> offending_stabilizers;
  /// Whether the label matrix has full rank k.
  bool rank_ok = false;
};

/// Checks that every stabilizer's labels cancel (symmetric difference empty)
/// and that the label matrix has rank k.
inline LabelValidation validate_labels(const ClassicalParityCode& code,
                                       const std::vector<ParityLabel>& labels) {
  if (labels.size() != code.n) throw InvalidArgument("label list length must equal n");
  LabelValidation out;
  for (size_t s = 0; s < code.stabilizers.size(); ++s) {
    ParityLabel acc;
    for (uint32_t q : code.stabilizers[s]) {
      if (q >= code.n) throw InvalidArgument("stabilizer qubit out of range");
      acc ^= labels[q];
    }
    if (!acc.empty()) out.offending_stabilizers.push_back(static_cast<uint32_t>(s));
  }
  LabelAssignment tmp{labels, std::nullopt};
  out.rank_ok = tmp.matrix(code.k).rank() == code.k;
  out.pass = out.offending_stabilizers.empty() && out.rank_ok;
  return out;
}

/// Qubits supporting the logical X of index i: every qubit whose label
/// contains i. Flipping all of them in the Z basis flips exactly that
/// logical, because each stabilizer overlaps the set evenly.
inline std::vector<uint32_t> logical_x_support(const std::vector<ParityLabel>& labels,
                                               uint32_t i) {
  std::vector<uint32_t> out;
  for (uint32_t q = 0; q < labels.size(); ++q) {
    if (labels[q].contains(i)) out.push_back(q);
  }
  return out;
}

/// Label of a Z-type product over a qubit set: the symmetric difference of
/// the individual labels.
inline ParityLabel label_of_z(const std::vector<ParityLabel>& labels,
                              const std::vector<uint32_t>& qubits) {
  ParityLabel acc;
  for (uint32_t q : qubits) {
    if (q >= labels.size()) throw InvalidArgument("qubit index out of range");
    acc ^= labels[q];
  }
  return acc;
}

struct LabelDerivation {
  LabelAssignment assignment;
  /// Qubits whose derived label came out empty (permitted, but suspicious).
  std::vector<uint32_t> empty_label_qubits;
};

namespace detail {

/// Eliminates on the first `cols` columns of `m` (which has extra
/// bookkeeping columns appended); returns pivot columns.
inline std::vector<size_t> eliminate_prefix(BitMatrix& m, size_t cols) {
  std::vector<size_t> pivots;
  size_t pivot_row = 0;
  for (size_t col = 0; col < cols && pivot_row < m.num_rows(); ++col) {
    size_t sel = m.num_rows();
    for (size_t r = pivot_row; r < m.num_rows(); ++r) {
      if (m.get(r, col)) {
        sel = r;
        break;
      }
    }
    if (sel == m.num_rows()) continue;
    if (sel != pivot_row) std::swap(m.row(pivot_row), m.row(sel));
    for (size_t r = 0; r < m.num_rows(); ++r) {
      if (r != pivot_row && m.get(r, col)) m.row(r) ^= m.row(pivot_row);
    }
    pivots.push_back(col);
    ++pivot_row;
  }
  return pivots;
}

}  // namespace detail

/// Derives per-qubit labels from seed assignments (qubit -> logical).
///
/// Seeds must name k distinct qubits and all k logicals; each seed qubit is
/// pinned to the singleton label {logical}. Labels of the remaining qubits
/// follow from the stabilizers: the labels inside each stabilizer support
/// must cancel. Runs cheap fixed-point propagation first (stabilizers with a
/// single unknown qubit) and falls back to GF(2) elimination for anything
/// propagation cannot reach.
///
/// Throws InconsistentSeeds when no labelling satisfies the stabilizers
/// (carrying the violated stabilizer indices) and UnderdeterminedLabels when
/// more than one does (carrying the qubits whose labels stay free).
inline LabelDerivation derive_labels(const ClassicalParityCode& code,
                                     const std::vector<std::pair<uint32_t, uint32_t>>& seeds) {
  code.validate();
  if (seeds.size() != code.k) {
    throw InvalidArgument("need exactly one seed per logical qubit");
  }
  std::vector<uint32_t> seed_qubit(code.k);
  std::vector<bool> logical_seen(code.k, false), qubit_seen(code.n, false);
  for (auto [q, i] : seeds) {
    if (q >= code.n) throw InvalidArgument("seed qubit out of range");
    if (i >= code.k) throw InvalidArgument("seed logical index out of range");
    if (logical_seen[i]) throw InvalidArgument("duplicate seed logical");
    if (qubit_seen[q]) throw InvalidArgument("duplicate seed qubit");
    logical_seen[i] = true;
    qubit_seen[q] = true;
    seed_qubit[i] = q;
  }

  // Fixed-point propagation.
  std::vector<std::optional<ParityLabel>> partial(code.n);
  for (uint32_t i = 0; i < code.k; ++i) partial[seed_qubit[i]] = ParityLabel::singleton(i);
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& stab : code.stabilizers) {
      uint32_t unknown = code.n;
      size_t unknown_count = 0;
      ParityLabel acc;
      for (uint32_t q : stab) {
        if (partial[q].has_value()) {
          acc ^= *partial[q];
        } else {
          unknown = q;
          ++unknown_count;
        }
      }
      if (unknown_count == 1) {
        partial[unknown] = acc;
        changed = true;
      }
    }
  }

  bool complete = true;
  for (uint32_t q = 0; q < code.n; ++q) complete = complete && partial[q].has_value();

  LabelDerivation out;
  if (complete) {
    out.assignment.labels.reserve(code.n);
    for (uint32_t q = 0; q < code.n; ++q) out.assignment.labels.push_back(*partial[q]);
    LabelValidation v = validate_labels(code, out.assignment.labels);
    if (!v.offending_stabilizers.empty()) {
      throw InconsistentSeeds("seeds contradict the stabilizers",
                              v.offending_stabilizers);
    }
  } else {
    // GF(2) fallback. System rows: one per stabilizer (labels must cancel),
    // one per seed qubit (label pinned). Provenance columns record which
    // original rows combined into each reduced row, so inconsistencies can
    // name the stabilizers involved.
    size_t s = code.stabilizers.size();
    size_t rows = s + code.k;
    BitMatrix sys(rows, code.n + rows);
    for (size_t r = 0; r < s; ++r) {
      for (uint32_t q : code.stabilizers[r]) sys.set(r, q, true);
    }
    for (uint32_t i = 0; i < code.k; ++i) sys.set(s + i, seed_qubit[i], true);
    for (size_t r = 0; r < rows; ++r) sys.set(r, code.n + r, true);
    std::vector<size_t> pivots = detail::eliminate_prefix(sys, code.n);

    // Right-hand sides: for logical i, zero on stabilizer rows and
    // [seed == i] on seed rows. A reduced row with empty coefficient part
    // flags inconsistency when its combined RHS is 1.
    std::vector<BitVector> solutions;
    for (uint32_t i = 0; i < code.k; ++i) {
      BitVector sol(code.n);
      for (size_t r = 0; r < rows; ++r) {
        bool coeff_empty = true;
        for (size_t c = 0; c < code.n && coeff_empty; ++c) coeff_empty = !sys.get(r, c);
        // RHS of the reduced row = parity of original RHS bits it combines.
        bool rhs = sys.get(r, code.n + s + i);
        if (coeff_empty && rhs) {
          std::vector<uint32_t> offending;
          for (size_t orig = 0; orig < s; ++orig) {
            if (sys.get(r, code.n + orig)) offending.push_back(static_cast<uint32_t>(orig));
          }
          throw InconsistentSeeds("seeds contradict the stabilizers", offending);
        }
      }
      for (size_t pr = 0; pr < pivots.size(); ++pr) {
        sol.set(pivots[pr], sys.get(pr, code.n + s + i));
      }
      solutions.push_back(std::move(sol));
    }

    // Any non-pivot qubit column means multiple labellings exist.
    std::vector<bool> is_pivot(code.n, false);
    for (size_t p : pivots) is_pivot[p] = true;
    std::vector<uint32_t> undetermined;
    for (uint32_t q = 0; q < code.n; ++q) {
      if (!is_pivot[q]) undetermined.push_back(q);
    }
    if (!undetermined.empty()) {
      throw UnderdeterminedLabels("stabilizers and seeds leave labels free",
                                  undetermined);
    }

    out.assignment.labels.assign(code.n, ParityLabel());
    for (uint32_t q = 0; q < code.n; ++q) {
      std::vector<uint32_t> idx;
      for (uint32_t i = 0; i < code.k; ++i) {
        if (solutions[i].get(q)) idx.push_back(i);
      }
      out.assignment.labels[q] = ParityLabel(std::move(idx));
    }
    LabelValidation v = validate_labels(code, out.assignment.labels);
    if (!v.offending_stabilizers.empty()) {
      throw InconsistentSeeds("seeds contradict the stabilizers",
                              v.offending_stabilizers);
    }
  }

  out.assignment.seeds = std::vector<uint32_t>(seed_qubit);
  for (uint32_t q = 0; q < code.n; ++q) {
    if (out.assignment.labels[q].empty()) out.empty_label_qubits.push_back(q);
  }
  return out;
}

/// Derives labels with automatically chosen seeds: row-reduce the null space
/// of the stabilizer indicator matrix; its pivot columns become the seed
/// qubits (logical i = i-th pivot) and the reduced rows give every label
/// directly.
inline LabelDerivation derive_labels(const ClassicalParityCode& code) {
  code.validate();
  BitMatrix stab = code.stabilizer_matrix();
  std::vector<BitVector> basis = stab.null_space();
  if (basis.size() != code.k) {
    throw InvalidArgument("stabilizer null space dimension must equal k");
  }
  BitMatrix nb;
  for (auto& v : basis) nb.append_row(std::move(v));
  RrefResult rr = nb.rref();

  LabelDerivation out;
  out.assignment.labels.assign(code.n, ParityLabel());
  for (uint32_t q = 0; q < code.n; ++q) {
    std::vector<uint32_t> idx;
    for (uint32_t i = 0; i < code.k; ++i) {
      if (rr.reduced.get(i, q)) idx.push_back(i);
    }
    out.assignment.labels[q] = ParityLabel(std::move(idx));
    if (out.assignment.labels[q].empty()) out.empty_label_qubits.push_back(q);
  }
  std::vector<uint32_t> seeds;
  seeds.reserve(code.k);
  for (size_t p : rr.pivots) seeds.push_back(static_cast<uint32_t>(p));
  out.assignment.seeds = std::move(seeds);
  return out;
}

struct DistanceReport {
  uint32_t distance = 0;
  /// per_logical[i] = minimum weight over logical X representatives that
  /// flip logical i (possibly together with others).
  std::vector<uint32_t> per_logical;
};

/// Exact code distance by enumerating all 2^k - 1 nontrivial logical X
/// classes. Every undetectable X-type error is the canonical support of
/// some class, so the enumeration is complete.
inline DistanceReport code_distance(const ClassicalParityCode& code,
                                    const std::vector<ParityLabel>& labels) {
  if (code.k > 20) throw GuardExceeded("distance enumeration limited to k <= 20");
  if (labels.size() != code.n) throw InvalidArgument("label list length must equal n");
  std::vector<uint64_t> masks(code.n, 0);
  for (uint32_t q = 0; q < code.n; ++q) {
    for (uint32_t i : labels[q].indices()) {
      if (i >= code.k) throw InvalidArgument("logical index out of range");
      masks[q] |= uint64_t{1} << i;
    }
  }
  DistanceReport rep;
  rep.per_logical.assign(code.k, UINT32_MAX);
  uint32_t best = UINT32_MAX;
  for (uint64_t t = 1; t < (uint64_t{1} << code.k); ++t) {
    uint32_t w = 0;
    for (uint32_t q = 0; q < code.n; ++q) w += std::popcount(masks[q] & t) & 1;
    best = std::min(best, w);
    for (uint32_t i = 0; i < code.k; ++i) {
      if ((t >> i) & 1) rep.per_logical[i] = std::min(rep.per_logical[i], w);
    }
  }
  rep.distance = best;
  return rep;
}

/// Triangular parity layout encoding all pairwise parities of k logical
/// qubits: n = k(k+1)/2 physical qubits (k base qubits then one per pair
/// (i,j), ordered by j-i then i), k(k-1)/2 plaquette stabilizers of weight 3
/// (bottom two rows) and 4 (diamonds above), distance k.
///
/// Coordinates: base qubit i at (2i, 0); pair (i,j) at (i+j, j-i).
inline ClassicalParityCode lhz_layout(uint32_t k) {
  if (k < 2) throw InvalidArgument("triangular layout needs k >= 2");
  ClassicalParityCode code;
  code.k = k;
  code.n = k * (k + 1) / 2;

  std::map<std::pair<uint32_t, uint32_t>, uint32_t> pair_index;
  std::vector<ParityLabel> labels;
  std::vector<std::array<int, 2>> coords;
  for (uint32_t i = 0; i < k; ++i) {
    labels.push_back(ParityLabel::singleton(i));
    coords.push_back({static_cast<int>(2 * i), 0});
  }
  uint32_t next = k;
  for (uint32_t level = 1; level < k; ++level) {
    for (uint32_t i = 0; i + level < k; ++i) {
      uint32_t j = i + level;
      pair_index[{i, j}] = next++;
      labels.push_back(ParityLabel({i, j}));
      coords.push_back({static_cast<int>(i + j), static_cast<int>(level)});
    }
  }

  auto add_stab = [&code](std::vector<uint32_t> s) {
    std::sort(s.begin(), s.end());
    code.stabilizers.push_back(std::move(s));
  };
  // Triangles against the base row.
  for (uint32_t i = 0; i + 1 < k; ++i) {
    add_stab({i, i + 1, pair_index[{i, i + 1}]});
  }
  // Triangles between the first two parity rows.
  for (uint32_t i = 0; i + 2 < k; ++i) {
    add_stab({pair_index[{i, i + 1}], pair_index[{i + 1, i + 2}], pair_index[{i, i + 2}]});
  }
  // Diamonds for every longer-range pair.
  for (uint32_t level = 3; level < k; ++level) {
    for (uint32_t i = 0; i + level < k; ++i) {
      uint32_t j = i + level;
      add_stab({pair_index[{i, j}], pair_index[{i, j - 1}], pair_index[{i + 1, j - 1}],
                pair_index[{i + 1, j}]});
    }
  }

  code.labels = std::move(labels);
  code.coords = std::move(coords);
  code.validate();
  return code;
}

/// Length-m repetition of one logical qubit: every physical qubit carries
/// label {0}; stabilizers are adjacent ZZ pairs; distance m.
inline ClassicalParityCode repetition_code(uint32_t m) {
  if (m < 1) throw InvalidArgument("repetition code needs at least one qubit");
  ClassicalParityCode code;
  code.n = m;
  code.k = 1;
  std::vector<ParityLabel> labels(m, ParityLabel::singleton(0));
  std::vector<std::array<int, 2>> coords;
  for (uint32_t q = 0; q < m; ++q) {
    if (q + 1 < m) code.stabilizers.push_back({q, q + 1});
    coords.push_back({static_cast<int>(q), 0});
  }
  code.labels = std::move(labels);
  code.coords = std::move(coords);
  code.validate();
  return code;
}

/// Places two labelled codes side by side: block b qubits are shifted by
/// a.n, block b logicals by a.k. Coordinates are dropped.
inline ClassicalParityCode disjoint_union(const ClassicalParityCode& a,
                                          const ClassicalParityCode& b) {
  if (!a.labels.has_value() || !b.labels.has_value()) {
    throw InvalidArgument("disjoint union needs labelled codes");
  }
  ClassicalParityCode out;
  out.n = a.n + b.n;
  out.k = a.k + b.k;
  out.stabilizers = a.stabilizers;
  for (const auto& s : b.stabilizers) {
    std::vector<uint32_t> shifted;
    shifted.reserve(s.size());
    for (uint32_t q : s) shifted.push_back(q + a.n);
    out.stabilizers.push_back(std::move(shifted));
  }
  std::vector<ParityLabel> labels = *a.labels;
  for (const auto& l : *b.labels) {
    std::vector<uint32_t> shifted;
    shifted.reserve(l.size());
    for (uint32_t i : l.indices()) shifted.push_back(i + a.k);
    labels.push_back(ParityLabel(std::move(shifted)));
  }
  out.labels = std::move(labels);
  out.validate();
  return out;
}

}  // namespace parityq
