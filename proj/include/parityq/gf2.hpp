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
#include <initializer_list>
#include <optional>
#include <string>
#include <vector>

#include "parityq/errors.hpp"

namespace parityq {

/// Dense bit vector over GF(2), packed into 64-bit words.
class BitVector {
 public:
  BitVector() = default;
  explicit BitVector(size_t n) : n_(n), w_((n + 63) / 64, 0) {}

  /// Builds from 0/1 entries.
  static BitVector from_bits(const std::vector<int>& bits) {
    BitVector v(bits.size());
    for (size_t i = 0; i < bits.size(); ++i) {
      if (bits[i]) v.set(i, true);
    }
    return v;
  }

  /// Builds an n-bit vector with ones at the given positions.
  static BitVector from_support(size_t n, const std::vector<uint32_t>& ones) {
    BitVector v(n);
    for (uint32_t i : ones) {
      if (i >= n) throw InvalidArgument("bit index out of range");
      v.set(i, true);
    }
    return v;
  }

  size_t size() const { return n_; }

  bool get(size_t i) const { return (w_[i >> 6] >> (i & 63)) & 1; }

  void set(size_t i, bool b) {
    uint64_t mask = uint64_t{1} << (i & 63);
    if (b) {
      w_[i >> 6] |= mask;
    } else {
      w_[i >> 6] &= ~mask;
    }
  }

  void flip(size_t i) { w_[i >> 6] ^= uint64_t{1} << (i & 63); }

  BitVector& operator^=(const BitVector& o) {
    check_same_size(o);
    for (size_t i = 0; i < w_.size(); ++i) w_[i] ^= o.w_[i];
    return *this;
  }

  friend BitVector operator^(BitVector a, const BitVector& b) {
    a ^= b;
    return a;
  }

  BitVector& operator&=(const BitVector& o) {
    check_same_size(o);
    for (size_t i = 0; i < w_.size(); ++i) w_[i] &= o.w_[i];
    return *this;
  }

  friend BitVector operator&(BitVector a, const BitVector& b) {
    a &= b;
    return a;
  }

  bool operator==(const BitVector& o) const = default;

  bool any() const {
    for (uint64_t w : w_) {
      if (w) return true;
    }
    return false;
  }

  size_t popcount() const {
    size_t c = 0;
    for (uint64_t w : w_) c += std::popcount(w);
    return c;
  }

  /// Parity of the overlap with `o`: popcount(*this & o) mod 2.
  bool overlap_parity(const BitVector& o) const {
    check_same_size(o);
    uint64_t acc = 0;
    for (size_t i = 0; i < w_.size(); ++i) acc ^= w_[i] & o.w_[i];
    return std::popcount(acc) & 1;
  }

  /// Appends a bit at index size().
  void push_back(bool b) {
    if ((n_ & 63) == 0) w_.push_back(0);
    ++n_;
    set(n_ - 1, b);
  }

  /// Removes the bit at `pos`, shifting higher bits down by one.
  void erase(size_t pos) {
    if (pos >= n_) throw InvalidArgument("bit index out of range");
    for (size_t i = pos; i + 1 < n_; ++i) set(i, get(i + 1));
    --n_;
    set_tail_zero();
    w_.resize((n_ + 63) / 64);
  }

  /// Indices of set bits, ascending.
  std::vector<uint32_t> ones() const {
    std::vector<uint32_t> out;
    for (size_t wi = 0; wi < w_.size(); ++wi) {
      uint64_t w = w_[wi];
      while (w) {
        out.push_back(static_cast<uint32_t>(wi * 64 + std::countr_zero(w)));
        w &= w - 1;
      }
    }
    return out;
  }

  std::string str() const {
    std::string s;
    s.reserve(n_);
    for (size_t i = 0; i < n_; ++i) s.push_back(get(i) ? '1' : '0');
    return s;
  }

  const std::vector<uint64_t>& words() const { return w_; }

 private:
  void check_same_size(const BitVector& o) const {
    if (n_ != o.n_) throw InvalidArgument("bit vector length mismatch");
  }

  void set_tail_zero() {
    if (n_ == 0) {
      for (auto& w : w_) w = 0;
      return;
    }
    size_t last = (n_ - 1) >> 6;
    size_t used = n_ - last * 64;
    if (used < 64) w_[last] &= (uint64_t{1} << used) - 1;
    for (size_t i = last + 1; i < w_.size(); ++i) w_[i] = 0;
  }

  size_t n_ = 0;
  std::vector<uint64_t> w_;
};

/// Result of row-reducing a matrix: the reduced matrix and, per pivot row,
/// the column of its leading 1.
struct RrefResult;

/// Dense matrix over GF(2), stored as one BitVector per row.
class BitMatrix {
 public:
  BitMatrix() = default;
  BitMatrix(size_t rows, size_t cols) : cols_(cols), rows_(rows, BitVector(cols)) {}

  /// Builds from 0/1 entries; all rows must have equal length.
  static BitMatrix from_rows(std::initializer_list<std::vector<int>> rows) {
    return from_rows(std::vector<std::vector<int>>(rows));
  }

  static BitMatrix from_rows(const std::vector<std::vector<int>>& rows) {
    BitMatrix m;
    for (const auto& r : rows) {
      BitVector v = BitVector::from_bits(r);
      if (!m.rows_.empty() && v.size() != m.cols_) {
        throw InvalidArgument("ragged rows in matrix literal");
      }
      m.cols_ = v.size();
      m.rows_.push_back(std::move(v));
    }
    return m;
  }

  size_t num_rows() const { return rows_.size(); }
  size_t num_cols() const { return cols_; }

  bool get(size_t r, size_t c) const { return rows_[r].get(c); }
  void set(size_t r, size_t c, bool b) { rows_[r].set(c, b); }

  BitVector& row(size_t r) { return rows_[r]; }
  const BitVector& row(size_t r) const { return rows_[r]; }

  void append_row(BitVector v) {
    if (rows_.empty() && cols_ == 0) cols_ = v.size();
    if (v.size() != cols_) throw InvalidArgument("row length mismatch");
    rows_.push_back(std::move(v));
  }

  bool operator==(const BitMatrix& o) const = default;

  /// Matrix-vector product over GF(2).
  BitVector multiply(const BitVector& x) const {
    if (x.size() != cols_) throw InvalidArgument("dimension mismatch in multiply");
    BitVector y(rows_.size());
    for (size_t r = 0; r < rows_.size(); ++r) y.set(r, rows_[r].overlap_parity(x));
    return y;
  }

  RrefResult rref() const;
  size_t rank() const;
  std::optional<BitVector> solve(const BitVector& b) const;
  std::vector<BitVector> null_space() const;

 private:
  size_t cols_ = 0;
  std::vector<BitVector> rows_;
};

struct RrefResult {
  BitMatrix reduced;
  /// pivots[i] is the column of row i's leading 1; rows past pivots.size()
  /// are zero.
  std::vector<size_t> pivots;
};

inline RrefResult BitMatrix::rref() const {
  RrefResult res;
  res.reduced = *this;
  BitMatrix& m = res.reduced;
  size_t pivot_row = 0;
  for (size_t col = 0; col < cols_ && pivot_row < m.num_rows(); ++col) {
    size_t sel = m.num_rows();
    for (size_t r = pivot_row; r < m.num_rows(); ++r) {
      if (m.get(r, col)) {
        sel = r;
        break;
      }
    }
    if (sel == m.num_rows()) continue;
    std::swap(m.rows_[pivot_row], m.rows_[sel]);
    for (size_t r = 0; r < m.num_rows(); ++r) {
      if (r != pivot_row && m.get(r, col)) m.rows_[r] ^= m.rows_[pivot_row];
    }
    res.pivots.push_back(col);
    ++pivot_row;
  }
  return res;
}

inline size_t BitMatrix::rank() const { return rref().pivots.size(); }

/// Solves A x = b. Returns the particular solution with all free variables
/// set to 0, or nullopt if the system is inconsistent.
inline std::optional<BitVector> BitMatrix::solve(const BitVector& b) const {
  if (b.size() != rows_.size()) throw InvalidArgument("dimension mismatch in solve");
  BitMatrix aug(rows_.size(), cols_ + 1);
  for (size_t r = 0; r < rows_.size(); ++r) {
    aug.rows_[r] = rows_[r];
    aug.rows_[r].push_back(b.get(r));
  }
  RrefResult rr = aug.rref();
  BitVector x(cols_);
  for (size_t i = 0; i < rr.pivots.size(); ++i) {
    if (rr.pivots[i] == cols_) return std::nullopt;
    x.set(rr.pivots[i], rr.reduced.get(i, cols_));
  }
  return x;
}

/// Basis of {x : A x = 0}, one vector per free column of rref(A).
inline std::vector<BitVector> BitMatrix::null_space() const {
  RrefResult rr = rref();
  std::vector<bool> is_pivot(cols_, false);
  for (size_t p : rr.pivots) is_pivot[p] = true;
  std::vector<BitVector> basis;
  for (size_t free = 0; free < cols_; ++free) {
    if (is_pivot[free]) continue;
    BitVector v(cols_);
    v.set(free, true);
    for (size_t i = 0; i < rr.pivots.size(); ++i) {
      if (rr.reduced.get(i, free)) v.set(rr.pivots[i], true);
    }
    basis.push_back(std::move(v));
  }
  return basis;
}

}  // namespace parityq
