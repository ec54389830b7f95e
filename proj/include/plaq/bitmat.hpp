// Copyright 2026 The Plaq Authors
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

#ifndef PLAQ_BITMAT_HPP
#define PLAQ_BITMAT_HPP

#include <cstdint>
#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

namespace plaq {

// Dense bit vector over GF(2), packed 64 bits per word.
class BitVector {
 public:
  BitVector() = default;
  explicit BitVector(size_t n) : n_(n), w_((n + 63) / 64, 0) {}

  size_t size() const { return n_; }
  size_t word_count() const { return w_.size(); }
  uint64_t *words() { return w_.data(); }
  const uint64_t *words() const { return w_.data(); }

  bool get(size_t i) const { return (w_[i >> 6] >> (i & 63)) & 1; }
  void set(size_t i, bool v) {
    uint64_t m = uint64_t(1) << (i & 63);
    if (v) w_[i >> 6] |= m; else w_[i >> 6] &= ~m;
  }
  void flip(size_t i) { w_[i >> 6] ^= uint64_t(1) << (i & 63); }

  void clear();
  void xor_with(const BitVector &other);
  size_t popcount() const;
  bool is_zero() const;

  bool operator==(const BitVector &o) const { return n_ == o.n_ && w_ == o.w_; }
  bool operator!=(const BitVector &o) const { return !(*this == o); }

  std::string str() const;

 private:
  size_t n_ = 0;
  std::vector<uint64_t> w_;
};

// Sorted set of column indices, used to restrict matrices to a region.
class ColumnSet {
 public:
  ColumnSet() = default;
  explicit ColumnSet(std::vector<size_t> cols);

  static ColumnSet range(size_t begin, size_t end);
  static ColumnSet complement_of(const ColumnSet &s, size_t n_cols);

  size_t size() const { return cols_.size(); }
  bool empty() const { return cols_.empty(); }
  size_t operator[](size_t i) const { return cols_[i]; }
  const std::vector<size_t> &indices() const { return cols_; }
  bool contains(size_t c) const;

 private:
  std::vector<size_t> cols_;
};

// Dense row-major bit matrix over GF(2).
class BitMatrix {
 public:
  BitMatrix() = default;
  BitMatrix(size_t rows, size_t cols)
      : rows_(rows), cols_(cols), row_words_((cols + 63) / 64),
        w_(rows * row_words_, 0) {}

  static BitMatrix identity(size_t n);

  size_t rows() const { return rows_; }
  size_t cols() const { return cols_; }
  size_t row_words() const { return row_words_; }
  uint64_t *row(size_t r) { return w_.data() + r * row_words_; }
  const uint64_t *row(size_t r) const { return w_.data() + r * row_words_; }

  bool get(size_t r, size_t c) const {
    return (row(r)[c >> 6] >> (c & 63)) & 1;
  }
  void set(size_t r, size_t c, bool v) {
    uint64_t m = uint64_t(1) << (c & 63);
    if (v) row(r)[c >> 6] |= m; else row(r)[c >> 6] &= ~m;
  }

  // row(dst) ^= row(src)
  void xor_rows(size_t dst, size_t src);
  void swap_rows(size_t a, size_t b);
  size_t row_weight(size_t r) const;
  bool row_is_zero(size_t r) const;
  BitVector row_copy(size_t r) const;
  void set_row(size_t r, const BitVector &v);
  void append_row(const BitVector &v);

  // v must have size cols(); result has size rows(). (M v)_r = <row r, v>.
  BitVector mul_vector(const BitVector &v) const;
  BitMatrix transposed() const;

  bool operator==(const BitMatrix &o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && w_ == o.w_;
  }

  std::string str() const;

 private:
  size_t rows_ = 0, cols_ = 0, row_words_ = 0;
  std::vector<uint64_t> w_;
};

enum class EliminationKernel { kAuto, kSerial, kParallel };

struct RowReduceResult {
  size_t rank = 0;
  std::vector<size_t> pivot_cols;  // ascending, one per pivot row
};

// In-place reduced row echelon form. Pivot choice is leftmost column,
// lowest row, so the result is canonical for a given row space.
RowReduceResult row_reduce(BitMatrix &m,
                           EliminationKernel kernel = EliminationKernel::kAuto);

size_t rank_of(BitMatrix m);

// Basis of {v : M v = 0}, one row per free column of the RREF, in free-column
// order. Canonical for a given M.
BitMatrix kernel_basis(const BitMatrix &m);

// Basis of {u : u^T M = 0}.
BitMatrix left_kernel_basis(const BitMatrix &m);

BitMatrix restrict_columns(const BitMatrix &m, const ColumnSet &s);

// rank of M restricted to the columns in s, i.e. dim of the projection of the
// row space onto s.
size_t projected_rank(const BitMatrix &m, const ColumnSet &s);

// Rows spanning the subgroup of the row space of `basis` whose members vanish
// on every column in s. Row count equals basis.rows() - projected_rank.
BitMatrix subgroup_vanishing_on(const BitMatrix &basis, const ColumnSet &s);

// Row-space product: rows of A select combinations of rows of B.
BitMatrix multiply(const BitMatrix &a, const BitMatrix &b);

// True if v is a combination of the rows of `basis`.
bool in_row_space(const BitMatrix &basis, const BitVector &v);

// Vertical stack; both inputs must share a column count.
BitMatrix vstack(const BitMatrix &top, const BitMatrix &bottom);

// Text format: a "rows cols" header line, then one '0'/'1' string per row.
void write_text(std::ostream &os, const BitMatrix &m);
BitMatrix read_bitmatrix_text(std::istream &is);

namespace detail {
void eliminate_rows_serial(BitMatrix &m, size_t pivot_row, size_t pivot_col,
                           const std::vector<uint32_t> &targets);
void eliminate_rows_parallel(BitMatrix &m, size_t pivot_row, size_t pivot_col,
                             const std::vector<uint32_t> &targets);
}  // namespace detail

}  // namespace plaq

#endif  // PLAQ_BITMAT_HPP
