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

#include <bit>
#include <stdexcept>

namespace plaq {

Tableau::Tableau(size_t n_qubits) : n_(n_qubits), g_(n_qubits, 2 * n_qubits) {}

Tableau Tableau::product_state(const std::vector<PauliAxis> &axes) {
  Tableau t(axes.size());
  for (size_t q = 0; q < axes.size(); q++) {
    if (axes[q] == PauliAxis::kX) {
      t.g_.set(q, q, true);
    } else {
      t.g_.set(q, t.n_ + q, true);
    }
  }
  return t;
}

Tableau Tableau::from_generators(const BitMatrix &g) {
  if (g.cols() != 2 * g.rows()) {
    throw std::invalid_argument("generator matrix must be n x 2n");
  }
  Tableau t(g.rows());
  t.g_ = g;
  return t;
}

void Tableau::apply_cnot(size_t control, size_t target) {
  if (control == target) throw std::invalid_argument("cnot on one qubit");
  for (size_t r = 0; r < n_; r++) {
    if (g_.get(r, control)) g_.set(r, target, !g_.get(r, target));
    if (g_.get(r, n_ + target)) g_.set(r, n_ + control, !g_.get(r, n_ + control));
  }
}

BitMatrix Tableau::generators() const {
  BitMatrix g = g_;
  row_reduce(g);
  return g;
}

void Tableau::apply_swap(size_t a, size_t b) {
  if (a == b) throw std::invalid_argument("swap needs distinct qubits");
  for (size_t r = 0; r < n_; r++) {
    bool xa = g_.get(r, a), xb = g_.get(r, b);
    g_.set(r, a, xb);
    g_.set(r, b, xa);
    bool za = g_.get(r, n_ + a), zb = g_.get(r, n_ + b);
    g_.set(r, n_ + a, zb);
    g_.set(r, n_ + b, za);
  }
}

void Tableau::apply_cz(size_t a, size_t b) {
  if (a == b) throw std::invalid_argument("cz on one qubit");
  for (size_t r = 0; r < n_; r++) {
    bool xa = g_.get(r, a), xb = g_.get(r, b);
    if (xa) g_.set(r, n_ + b, !g_.get(r, n_ + b));
    if (xb) g_.set(r, n_ + a, !g_.get(r, n_ + a));
  }
}

namespace {

// Replace the lowest anticommuting generator with the measured operator and
// multiply it into every other anticommuting generator.
bool apply_measurement(BitMatrix &g, const std::vector<size_t> &anti,
                       size_t n, const BitVector &px, const BitVector &pz) {
  if (anti.empty()) return false;
  size_t j = anti[0];
  for (size_t i = 1; i < anti.size(); i++) g.xor_rows(anti[i], j);
  BitVector row(2 * n);
  for (size_t q = 0; q < n; q++) {
    if (px.get(q)) row.set(q, true);
    if (pz.get(q)) row.set(n + q, true);
  }
  g.set_row(j, row);
  return true;
}

}  // namespace

bool Tableau::measure_x(size_t q) {
  std::vector<size_t> anti;
  for (size_t r = 0; r < n_; r++) {
    if (g_.get(r, n_ + q)) anti.push_back(r);
  }
  BitVector px(n_), pz(n_);
  px.set(q, true);
  return apply_measurement(g_, anti, n_, px, pz);
}

bool Tableau::measure_z(size_t q) {
  std::vector<size_t> anti;
  for (size_t r = 0; r < n_; r++) {
    if (g_.get(r, q)) anti.push_back(r);
  }
  BitVector px(n_), pz(n_);
  pz.set(q, true);
  return apply_measurement(g_, anti, n_, px, pz);
}

bool Tableau::measure_pauli(const PauliString &p) {
  if (p.x.size() != n_ || p.z.size() != n_) {
    throw std::invalid_argument("pauli string size mismatch");
  }
  std::vector<size_t> anti;
  for (size_t r = 0; r < n_; r++) {
    // Symplectic product: <g_r, P> = x_r.z_P + z_r.x_P (mod 2).
    uint64_t acc = 0;
    const uint64_t *row = g_.row(r);
    size_t half_words = (n_ + 63) / 64;
    for (size_t w = 0; w < half_words; w++) acc ^= row[w] & p.z.words()[w];
    size_t par = std::popcount(acc) & 1;
    BitVector zr(n_);
    for (size_t q = 0; q < n_; q++) zr.set(q, g_.get(r, n_ + q));
    acc = 0;
    for (size_t w = 0; w < half_words; w++) acc ^= zr.words()[w] & p.x.words()[w];
    par ^= std::popcount(acc) & 1;
    if (par) anti.push_back(r);
  }
  return apply_measurement(g_, anti, n_, p.x, p.z);
}

size_t Tableau::entanglement_entropy(const ColumnSet &qubits) const {
  std::vector<size_t> cols;
  cols.reserve(qubits.size() * 2);
  for (size_t i = 0; i < qubits.size(); i++) {
    cols.push_back(qubits[i]);
    cols.push_back(n_ + qubits[i]);
  }
  size_t r = projected_rank(g_, ColumnSet(std::move(cols)));
  return r - qubits.size();
}

size_t Tableau::entanglement_entropy_cells(size_t cell_begin, size_t cell_end) const {
  return entanglement_entropy(ColumnSet::range(2 * cell_begin, 2 * cell_end));
}

std::optional<SectorCounts> Tableau::sector_counts() const {
  SectorCounts sc;
  sc.n_z = n_ - participation_entropy_z();
  sc.n_x = n_ - participation_entropy_x();
  if (sc.n_x + sc.n_z != n_) return std::nullopt;
  return sc;
}

size_t Tableau::participation_entropy_z() const {
  return projected_rank(g_, ColumnSet::range(0, n_));
}

size_t Tableau::participation_entropy_x() const {
  return projected_rank(g_, ColumnSet::range(n_, 2 * n_));
}

bool Tableau::contains_z_string(const BitVector &v) const {
  if (v.size() != n_) throw std::invalid_argument("z string size mismatch");
  BitVector full(2 * n_);
  for (size_t q = 0; q < n_; q++) {
    if (v.get(q)) full.set(n_ + q, true);
  }
  return in_row_space(g_, full);
}

bool Tableau::full_rank() const { return rank_of(g_) == n_; }

}  // namespace plaq
