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

#ifndef PLAQ_TABLEAU_HPP
#define PLAQ_TABLEAU_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "plaq/bitmat.hpp"

namespace plaq {

enum class PauliAxis : uint8_t { kX, kZ };

// Unit cell address. Qubit order is interleaved: a_0, b_0, a_1, b_1, ...
struct SiteAddress {
  uint32_t cell;
  enum Sub : uint8_t { kA = 0, kB = 1 } sub;
  size_t qubit() const { return size_t(cell) * 2 + (sub == kB ? 1 : 0); }
};

struct SectorCounts {
  size_t n_x = 0;  // dim of the X-only subgroup
  size_t n_z = 0;  // dim of the Z-only subgroup
};

// Pauli string without phase, as (x, z) bit masks over qubits.
struct PauliString {
  BitVector x, z;
  explicit PauliString(size_t n) : x(n), z(n) {}
};

// Sign-free stabilizer tableau: n independent commuting generators stored as
// rows of an n x 2n bit matrix, X block in columns [0, n), Z block in [n, 2n).
// Signs and measurement outcomes are never tracked; every entropy and sector
// observable is invariant under them.
class Tableau {
 public:
  explicit Tableau(size_t n_qubits);

  static Tableau product_state(const std::vector<PauliAxis> &axes);

  // g must be n x 2n with independent rows.
  static Tableau from_generators(const BitMatrix &g);

  size_t n() const { return n_; }
  // Canonical row-reduced generator basis; tableaux of the same state
  // compare equal.
  BitMatrix generators() const;

  bool x_bit(size_t row, size_t q) const { return g_.get(row, q); }
  bool z_bit(size_t row, size_t q) const { return g_.get(row, n_ + q); }

  void apply_cnot(size_t control, size_t target);
  void apply_swap(size_t a, size_t b);
  void apply_cz(size_t a, size_t b);

  // Projective measurement. If the operator commutes with the whole group the
  // state is unchanged; otherwise the lowest-index anticommuting generator is
  // replaced by the measured operator and multiplied into the others.
  // Returns true when the outcome was indeterminate (a generator was replaced).
  bool measure_x(size_t q);
  bool measure_z(size_t q);
  bool measure_pauli(const PauliString &p);

  // Entanglement entropy in bits of a set of qubits. For stabilizer states all
  // Renyi orders coincide, so this is also the order-2 entropy.
  size_t entanglement_entropy(const ColumnSet &qubits) const;
  size_t entanglement_entropy_cells(size_t cell_begin, size_t cell_end) const;

  // Populated only when the state is sector pure (n_x + n_z == n), i.e. the
  // group is generated by pure-X and pure-Z strings.
  std::optional<SectorCounts> sector_counts() const;

  // Computational-basis participation entropies in bits:
  //   PE_Z = n - dim(group intersect Z-only strings) = rank of the X block,
  //   PE_X = n - dim(group intersect X-only strings) = rank of the Z block.
  size_t participation_entropy_z() const;
  size_t participation_entropy_x() const;

  // True if the phase-free Z string with support v is in the stabilizer group.
  bool contains_z_string(const BitVector &v) const;

  // Generators are independent (full row rank over GF(2)).
  bool full_rank() const;

 private:
  size_t n_;
  BitMatrix g_;
};

// Fast path for circuits that keep the group sector pure. Generators live in
// per-sector slots; bits are stored qubit-major so CNOT and SWAP become whole
// word-row operations. Produces the same observables as Tableau.
class SplitTableau {
 public:
  static SplitTableau product_state(const std::vector<PauliAxis> &axes);

  size_t n() const { return n_; }
  size_t n_x() const { return nx_; }
  size_t n_z() const { return nz_; }

  void apply_cnot(size_t control, size_t target);
  void apply_swap(size_t a, size_t b);
  bool measure_x(size_t q);
  bool measure_z(size_t q);

  size_t entanglement_entropy(const ColumnSet &qubits) const;
  size_t entanglement_entropy_cells(size_t cell_begin, size_t cell_end) const;
  size_t participation_entropy_z() const { return nx_; }
  size_t participation_entropy_x() const { return nz_; }

  // Reconstructs the generator-major tableau (X generators first).
  Tableau to_tableau() const;

 private:
  explicit SplitTableau(size_t n);

  size_t sector_rank(const BitMatrix &mat, const ColumnSet &qubits) const;

  size_t n_ = 0;
  size_t nx_ = 0, nz_ = 0;
  // qx_(q, slot) = generator in X slot has X support on qubit q; same for Z.
  BitMatrix qx_, qz_;
  std::vector<uint32_t> free_x_, free_z_;  // free slot stacks
  std::vector<char> used_x_, used_z_;
};

}  // namespace plaq

#endif  // PLAQ_TABLEAU_HPP
