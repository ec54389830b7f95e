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

#ifndef PLAQ_PLAQUETTE_HPP
#define PLAQ_PLAQUETTE_HPP

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "plaq/bitmat.hpp"

namespace plaq {

// L x T grid of classical bits, periodic in x, open in t. Site (x, t) with
// x in [0, L) and t in [1, T] has flat index x + L*(t-1). Each site carries
// q = 5 (a five-body plaquette check centered there when the site is
// interior) or q = 1 (a one-body pin, i.e. a measured site).
struct DisorderGrid {
  size_t L = 0, T = 0;
  std::vector<uint8_t> q;

  DisorderGrid() = default;
  DisorderGrid(size_t L_, size_t T_) : L(L_), T(T_), q(L_ * T_, 5) {}

  size_t site(size_t x, size_t t) const { return x + L * (t - 1); }
  uint8_t at(size_t x, size_t t) const { return q[site(x, t)]; }
  void set(size_t x, size_t t, uint8_t v) { q[site(x, t)] = v; }

  // i.i.d. q=1 with probability p on circuit rows 2..T-2 only.
  static DisorderGrid random_interior(size_t L, size_t T, double p, uint64_t seed);

  // Text format: an "L T" header line, then T lines of L characters from
  // {'1','5'}, row t=1 first.
  void write(std::ostream &os) const;
  static DisorderGrid read(std::istream &is);
};

// Which bottom-row sites are pinned to zero before any measurement marker is
// applied. Row 1 holds the initial b qubits, row 2 the initial a qubits; a
// pinned site corresponds to a qubit prepared in a Z eigenstate.
struct InitialCondition {
  BitVector pin_row1, pin_row2;

  static InitialCondition free_rows(size_t L);    // all X (both rows free)
  static InitialCondition fix_row1(size_t L);     // b in Z, a in X
  static InitialCondition fix_row2(size_t L);     // a in Z, b in X
  static InitialCondition fix_rows12(size_t L);   // all Z (both rows pinned)
};

// Parity-check system over the active (non-eliminated) sites of a grid.
// Rows of h are checks, columns are active sites.
struct ParityCheckSystem {
  size_t L = 0, T = 0;
  BitMatrix h;
  std::vector<int32_t> site_col;        // L*T entries, -1 when eliminated
  std::vector<uint32_t> col_site;
  std::vector<uint32_t> eliminated_sites;

  size_t n() const { return h.cols(); }
  size_t m() const { return h.rows(); }

  // Columns of the top two rows (T-1 and T), which carry the final quantum
  // state: (x, T-1) is qubit b_x and (x, T) is qubit a_x.
  ColumnSet boundary_columns() const;
  // Boundary columns of cells x in [x0, x1), both rows.
  ColumnSet boundary_region(size_t x0, size_t x1) const;
};

// Builds the check system for a grid:
//  - every interior site (1 < t < T) contributes one check row: the 5-body
//    stencil {(x,t), (x-1,t), (x+1,t), (x,t-1), (x,t+1)} for q=5, or the
//    1-body pin {(x,t)} for q=1;
//  - initially pinned sites are eliminated as columns and dropped from check
//    supports (pin-to-zero; measurement outcomes are affine shifts that leave
//    every nullity unchanged);
//  - a q=1 marker on row 1 (a first-step measurement) un-pins (x,2) if it was
//    pinned, and contributes a 1-body check on (x,1) if that site is free.
// Requires L >= 3 and T >= 3.
ParityCheckSystem build_parity_checks(const DisorderGrid &grid,
                                      const InitialCondition &init);

// Basis of the symmetry group G = ker h.
struct SymmetryBasis {
  BitMatrix basis;  // k x n
  size_t k() const { return basis.rows(); }
};

SymmetryBasis symmetry_basis(const ParityCheckSystem &sys);

// Basis of the bulk subgroup G_B (members vanishing on every boundary column).
BitMatrix bulk_subgroup(const ParityCheckSystem &sys, const SymmetryBasis &g);

// Boundary quotient G/G_B, represented on the 2L boundary columns in reduced
// row echelon form.  A generator's support is its circumferential footprint:
// the number of cells in the smallest circular arc covering every cell it
// touches, so a local generator reports O(1) and one wrapping the ring
// reports L.
struct BoundaryGroupReport {
  size_t dim = 0;
  BitMatrix generators;           // dim x 2L, RREF over boundary columns
  std::vector<size_t> supports;   // one footprint per generator
};

BoundaryGroupReport boundary_quotient_generators(const ParityCheckSystem &sys,
                                                 const SymmetryBasis &g);

// Histogram of boundary supports and the fraction of generators whose support
// reaches at least L/2 cells of the circumference.
struct SupportStatistics {
  size_t dim = 0;
  std::vector<size_t> histogram;  // index = support size, 0..2L
  double extensive_fraction = 0.0;
};

SupportStatistics support_statistics(const BoundaryGroupReport &report, size_t L);

// Single-pattern cellular automaton run matching the circuit semantics.
// Starting from rows 1 and 2, applies T-2 update steps
//   s(x, t+1) = s(x, t) + s(x-1, t) + s(x+1, t) + s(x, t-1)
// with measured sites handled as in build_parity_checks: at a q=1 site on row
// u the current value is forced to zero (forced_zero_hits counts the cases
// where it was set), and the site's a partner on row u+1 is a fresh degree of
// freedom, canonicalized to zero (support_destroyed counts the cases where
// the pattern had support there). Markers on rows T-1 and T lie outside the
// circuit window and are ignored.
struct AutomatonResult {
  BitVector row_second_last;  // row T-1
  BitVector row_last;         // row T
  size_t forced_zero_hits = 0;
  size_t support_destroyed = 0;
  size_t new_dof_sites = 0;
};

AutomatonResult automaton_evolve(const BitVector &row1, const BitVector &row2,
                                 const DisorderGrid &grid);

}  // namespace plaq

#endif  // PLAQ_PLAQUETTE_HPP
