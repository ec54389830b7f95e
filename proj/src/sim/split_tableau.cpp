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

#include "plaq/tableau.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

namespace plaq {

SplitTableau::SplitTableau(size_t n)
    : n_(n), qx_(n, n), qz_(n, n), used_x_(n, 0), used_z_(n, 0) {
  free_x_.reserve(n);
  free_z_.reserve(n);
  for (size_t i = n; i-- > 0;) {
    free_x_.push_back((uint32_t)i);
    free_z_.push_back((uint32_t)i);
  }
}

SplitTableau SplitTableau::product_state(const std::vector<PauliAxis> &axes) {
  SplitTableau t(axes.size());
  for (size_t q = 0; q < axes.size(); q++) {
    if (axes[q] == PauliAxis::kX) {
      uint32_t s = t.free_x_.back();
      t.free_x_.pop_back();
      t.used_x_[s] = 1;
      t.qx_.set(q, s, true);
      t.nx_++;
    } else {
      uint32_t s = t.free_z_.back();
      t.free_z_.pop_back();
      t.used_z_[s] = 1;
      t.qz_.set(q, s, true);
      t.nz_++;
    }
  }
  return t;
}

void SplitTableau::apply_cnot(size_t control, size_t target) {
  if (control == target) throw std::invalid_argument("cnot on one qubit");
  qx_.xor_rows(target, control);
  qz_.xor_rows(control, target);
}

void SplitTableau::apply_swap(size_t a, size_t b) {
  qx_.swap_rows(a, b);
  qz_.swap_rows(a, b);
}

namespace {

// Set bits of the word row, as slot indices.
std::vector<uint32_t> slots_of(const BitMatrix &m, size_t qubit) {
  std::vector<uint32_t> out;
  const uint64_t *p = m.row(qubit);
  for (size_t wi = 0; wi < m.row_words(); wi++) {
    uint64_t w = p[wi];
    while (w) {
      out.push_back((uint32_t)((wi << 6) + std::countr_zero(w)));
      w &= w - 1;
    }
  }
  return out;
}

}  // namespace

bool SplitTableau::measure_x(size_t q) {
  std::vector<uint32_t> anti = slots_of(qz_, q);
  if (anti.empty()) return false;
  uint32_t j = anti[0];
  std::vector<uint32_t> supp;
  for (size_t r = 0; r < n_; r++) {
    if (qz_.get(r, j)) supp.push_back((uint32_t)r);
  }
  for (size_t i = 1; i < anti.size(); i++) {
    uint32_t k = anti[i];
    for (uint32_t r : supp) qz_.set(r, k, !qz_.get(r, k));
  }
  for (uint32_t r : supp) qz_.set(r, j, false);
  used_z_[j] = 0;
  free_z_.push_back(j);
  nz_--;
  uint32_t s = free_x_.back();
  free_x_.pop_back();
  used_x_[s] = 1;
  qx_.set(q, s, true);
  nx_++;
  return true;
}

bool SplitTableau::measure_z(size_t q) {
  std::vector<uint32_t> anti = slots_of(qx_, q);
  if (anti.empty()) return false;
  uint32_t j = anti[0];
  std::vector<uint32_t> supp;
  for (size_t r = 0; r < n_; r++) {
    if (qx_.get(r, j)) supp.push_back((uint32_t)r);
  }
  for (size_t i = 1; i < anti.size(); i++) {
    uint32_t k = anti[i];
    for (uint32_t r : supp) qx_.set(r, k, !qx_.get(r, k));
  }
  for (uint32_t r : supp) qx_.set(r, j, false);
  used_x_[j] = 0;
  free_x_.push_back(j);
  nx_--;
  uint32_t s = free_z_.back();
  free_z_.pop_back();
  used_z_[s] = 1;
  qz_.set(q, s, true);
  nz_++;
  return true;
}

size_t SplitTableau::sector_rank(const BitMatrix &mat, const ColumnSet &qubits) const {
  BitMatrix scratch(qubits.size(), n_);
  for (size_t i = 0; i < qubits.size(); i++) {
    std::copy(mat.row(qubits[i]), mat.row(qubits[i]) + mat.row_words(),
              scratch.row(i));
  }
  return row_reduce(scratch, EliminationKernel::kSerial).rank;
}

size_t SplitTableau::entanglement_entropy(const ColumnSet &qubits) const {
  // rank of the generator matrix restricted to the region equals the sum of
  // the per-sector ranks; each equals the rank of the transposed qubit rows.
  return sector_rank(qx_, qubits) + sector_rank(qz_, qubits) - qubits.size();
}

size_t SplitTableau::entanglement_entropy_cells(size_t cell_begin,
                                                size_t cell_end) const {
  return entanglement_entropy(ColumnSet::range(2 * cell_begin, 2 * cell_end));
}

Tableau SplitTableau::to_tableau() const {
  BitMatrix g(n_, 2 * n_);
  size_t r = 0;
  for (size_t s = 0; s < n_; s++) {
    if (!used_x_[s]) continue;
    for (size_t q = 0; q < n_; q++) {
      if (qx_.get(q, s)) g.set(r, q, true);
    }
    r++;
  }
  for (size_t s = 0; s < n_; s++) {
    if (!used_z_[s]) continue;
    for (size_t q = 0; q < n_; q++) {
      if (qz_.get(q, s)) g.set(r, n_ + q, true);
    }
    r++;
  }
  if (r != n_) throw std::logic_error("split tableau lost generators");
  return Tableau::from_generators(g);
}

}  // namespace plaq
