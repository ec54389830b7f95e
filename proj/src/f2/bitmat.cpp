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

#include "plaq/bitmat.hpp"

#include <algorithm>
#include <bit>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace plaq {

void BitVector::clear() { std::fill(w_.begin(), w_.end(), 0); }

void BitVector::xor_with(const BitVector &other) {
  if (other.n_ != n_) throw std::invalid_argument("BitVector size mismatch");
  for (size_t i = 0; i < w_.size(); i++) w_[i] ^= other.w_[i];
}

size_t BitVector::popcount() const {
  size_t c = 0;
  for (uint64_t w : w_) c += std::popcount(w);
  return c;
}

bool BitVector::is_zero() const {
  for (uint64_t w : w_) if (w) return false;
  return true;
}

std::string BitVector::str() const {
  std::string s(n_, '0');
  for (size_t i = 0; i < n_; i++) if (get(i)) s[i] = '1';
  return s;
}

ColumnSet::ColumnSet(std::vector<size_t> cols) : cols_(std::move(cols)) {
  std::sort(cols_.begin(), cols_.end());
  cols_.erase(std::unique(cols_.begin(), cols_.end()), cols_.end());
}

ColumnSet ColumnSet::range(size_t begin, size_t end) {
  std::vector<size_t> v;
  v.reserve(end > begin ? end - begin : 0);
  for (size_t i = begin; i < end; i++) v.push_back(i);
  ColumnSet s;
  s.cols_ = std::move(v);
  return s;
}

ColumnSet ColumnSet::complement_of(const ColumnSet &s, size_t n_cols) {
  std::vector<size_t> v;
  v.reserve(n_cols - std::min(n_cols, s.size()));
  size_t j = 0;
  for (size_t i = 0; i < n_cols; i++) {
    if (j < s.size() && s[j] == i) { j++; continue; }
    v.push_back(i);
  }
  ColumnSet out;
  out.cols_ = std::move(v);
  return out;
}

bool ColumnSet::contains(size_t c) const {
  return std::binary_search(cols_.begin(), cols_.end(), c);
}

BitMatrix BitMatrix::identity(size_t n) {
  BitMatrix m(n, n);
  for (size_t i = 0; i < n; i++) m.set(i, i, true);
  return m;
}

void BitMatrix::xor_rows(size_t dst, size_t src) {
  uint64_t *d = row(dst);
  const uint64_t *s = row(src);
  for (size_t i = 0; i < row_words_; i++) d[i] ^= s[i];
}

void BitMatrix::swap_rows(size_t a, size_t b) {
  if (a == b) return;
  uint64_t *pa = row(a), *pb = row(b);
  for (size_t i = 0; i < row_words_; i++) std::swap(pa[i], pb[i]);
}

size_t BitMatrix::row_weight(size_t r) const {
  const uint64_t *p = row(r);
  size_t c = 0;
  for (size_t i = 0; i < row_words_; i++) c += std::popcount(p[i]);
  return c;
}

bool BitMatrix::row_is_zero(size_t r) const {
  const uint64_t *p = row(r);
  for (size_t i = 0; i < row_words_; i++) if (p[i]) return false;
  return true;
}

BitVector BitMatrix::row_copy(size_t r) const {
  BitVector v(cols_);
  std::copy(row(r), row(r) + row_words_, v.words());
  return v;
}

void BitMatrix::set_row(size_t r, const BitVector &v) {
  if (v.size() != cols_) throw std::invalid_argument("set_row size mismatch");
  std::copy(v.words(), v.words() + row_words_, row(r));
}

void BitMatrix::append_row(const BitVector &v) {
  if (v.size() != cols_) throw std::invalid_argument("append_row size mismatch");
  w_.resize(w_.size() + row_words_, 0);
  rows_++;
  set_row(rows_ - 1, v);
}

BitVector BitMatrix::mul_vector(const BitVector &v) const {
  if (v.size() != cols_) throw std::invalid_argument("mul_vector size mismatch");
  BitVector out(rows_);
  for (size_t r = 0; r < rows_; r++) {
    uint64_t acc = 0;
    const uint64_t *p = row(r);
    for (size_t i = 0; i < row_words_; i++) acc ^= p[i] & v.words()[i];
    out.set(r, std::popcount(acc) & 1);
  }
  return out;
}

BitMatrix BitMatrix::transposed() const {
  BitMatrix t(cols_, rows_);
  for (size_t r = 0; r < rows_; r++) {
    const uint64_t *p = row(r);
    for (size_t wi = 0; wi < row_words_; wi++) {
      uint64_t w = p[wi];
      while (w) {
        size_t c = (wi << 6) + std::countr_zero(w);
        t.set(c, r, true);
        w &= w - 1;
      }
    }
  }
  return t;
}

std::string BitMatrix::str() const {
  std::string s;
  for (size_t r = 0; r < rows_; r++) {
    for (size_t c = 0; c < cols_; c++) s += get(r, c) ? '1' : '0';
    s += '\n';
  }
  return s;
}

namespace detail {

void eliminate_rows_serial(BitMatrix &m, size_t pivot_row, size_t /*pivot_col*/,
                           const std::vector<uint32_t> &targets) {
  for (uint32_t r : targets) m.xor_rows(r, pivot_row);
}

void eliminate_rows_parallel(BitMatrix &m, size_t pivot_row, size_t /*pivot_col*/,
                             const std::vector<uint32_t> &targets) {
  const uint64_t *src = m.row(pivot_row);
  const size_t nw = m.row_words();
  int64_t n = (int64_t)targets.size();
#pragma omp parallel for schedule(static)
  for (int64_t i = 0; i < n; i++) {
    uint64_t *d = m.row(targets[(size_t)i]);
    for (size_t k = 0; k < nw; k++) d[k] ^= src[k];
  }
}

}  // namespace detail

RowReduceResult row_reduce(BitMatrix &m, EliminationKernel kernel) {
  RowReduceResult res;
  const size_t rows = m.rows(), cols = m.cols();
  bool parallel;
  switch (kernel) {
    case EliminationKernel::kSerial: parallel = false; break;
    case EliminationKernel::kParallel: parallel = true; break;
    default: parallel = rows * m.row_words() > (size_t(1) << 16); break;
  }
  std::vector<uint32_t> targets;
  targets.reserve(rows);
  size_t r = 0;
  for (size_t c = 0; c < cols && r < rows; c++) {
    size_t pivot = rows;
    for (size_t i = r; i < rows; i++) {
      if (m.get(i, c)) { pivot = i; break; }
    }
    if (pivot == rows) continue;
    m.swap_rows(r, pivot);
    targets.clear();
    for (size_t i = 0; i < rows; i++) {
      if (i != r && m.get(i, c)) targets.push_back((uint32_t)i);
    }
    if (!targets.empty()) {
      if (parallel) {
        detail::eliminate_rows_parallel(m, r, c, targets);
      } else {
        detail::eliminate_rows_serial(m, r, c, targets);
      }
    }
    res.pivot_cols.push_back(c);
    r++;
  }
  res.rank = r;
  return res;
}

size_t rank_of(BitMatrix m) { return row_reduce(m).rank; }

BitMatrix kernel_basis(const BitMatrix &m) {
  BitMatrix red = m;
  RowReduceResult rr = row_reduce(red);
  const size_t cols = m.cols();
  std::vector<char> is_pivot(cols, 0);
  for (size_t c : rr.pivot_cols) is_pivot[c] = 1;
  std::vector<size_t> free_cols;
  for (size_t c = 0; c < cols; c++) if (!is_pivot[c]) free_cols.push_back(c);
  BitMatrix basis(free_cols.size(), cols);
  for (size_t i = 0; i < free_cols.size(); i++) {
    size_t f = free_cols[i];
    basis.set(i, f, true);
    for (size_t p = 0; p < rr.pivot_cols.size(); p++) {
      if (red.get(p, f)) basis.set(i, rr.pivot_cols[p], true);
    }
  }
  return basis;
}

BitMatrix left_kernel_basis(const BitMatrix &m) {
  return kernel_basis(m.transposed());
}

BitMatrix restrict_columns(const BitMatrix &m, const ColumnSet &s) {
  BitMatrix out(m.rows(), s.size());
  for (size_t r = 0; r < m.rows(); r++) {
    for (size_t i = 0; i < s.size(); i++) {
      if (m.get(r, s[i])) out.set(r, i, true);
    }
  }
  return out;
}

size_t projected_rank(const BitMatrix &m, const ColumnSet &s) {
  return rank_of(restrict_columns(m, s));
}

BitMatrix subgroup_vanishing_on(const BitMatrix &basis, const ColumnSet &s) {
  BitMatrix restricted = restrict_columns(basis, s);
  BitMatrix combos = kernel_basis(restricted.transposed());
  return multiply(combos, basis);
}

BitMatrix multiply(const BitMatrix &a, const BitMatrix &b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("multiply shape mismatch");
  BitMatrix out(a.rows(), b.cols());
  for (size_t r = 0; r < a.rows(); r++) {
    uint64_t *dst = out.row(r);
    const uint64_t *sel = a.row(r);
    for (size_t wi = 0; wi < a.row_words(); wi++) {
      uint64_t w = sel[wi];
      while (w) {
        size_t k = (wi << 6) + std::countr_zero(w);
        const uint64_t *src = b.row(k);
        for (size_t j = 0; j < b.row_words(); j++) dst[j] ^= src[j];
        w &= w - 1;
      }
    }
  }
  return out;
}

bool in_row_space(const BitMatrix &basis, const BitVector &v) {
  BitMatrix m = basis;
  m.append_row(v);
  return rank_of(std::move(m)) == rank_of(basis);
}

BitMatrix vstack(const BitMatrix &top, const BitMatrix &bottom) {
  if (top.cols() != bottom.cols()) throw std::invalid_argument("vstack shape mismatch");
  BitMatrix out(top.rows() + bottom.rows(), top.cols());
  for (size_t r = 0; r < top.rows(); r++) {
    std::copy(top.row(r), top.row(r) + top.row_words(), out.row(r));
  }
  for (size_t r = 0; r < bottom.rows(); r++) {
    std::copy(bottom.row(r), bottom.row(r) + bottom.row_words(),
              out.row(top.rows() + r));
  }
  return out;
}

void write_text(std::ostream &os, const BitMatrix &m) {
  os << m.rows() << ' ' << m.cols() << '\n';
  for (size_t r = 0; r < m.rows(); r++) {
    for (size_t c = 0; c < m.cols(); c++) os << (m.get(r, c) ? '1' : '0');
    os << '\n';
  }
}

BitMatrix read_bitmatrix_text(std::istream &is) {
  size_t rows = 0, cols = 0;
  if (!(is >> rows >> cols)) throw std::runtime_error("bad bit matrix header");
  BitMatrix m(rows, cols);
  for (size_t r = 0; r < rows; r++) {
    std::string line;
    if (!(is >> line) || line.size() != cols) {
      throw std::runtime_error("bad bit matrix row " + std::to_string(r));
    }
    for (size_t c = 0; c < cols; c++) {
      if (line[c] != '0' && line[c] != '1') {
        throw std::runtime_error("bad bit matrix character");
      }
      if (line[c] == '1') m.set(r, c, true);
    }
  }
  return m;
}

}  // namespace plaq
