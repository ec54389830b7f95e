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

#include "plaq/plaquette.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

namespace plaq {

ColumnSet ParityCheckSystem::boundary_columns() const {
  return boundary_region(0, L);
}

ColumnSet ParityCheckSystem::boundary_region(size_t x0, size_t x1) const {
  std::vector<size_t> cols;
  cols.reserve(2 * (x1 - x0));
  DisorderGrid idx;
  idx.L = L;
  idx.T = T;
  for (size_t x = x0; x < x1; x++) {
    for (size_t t : {T - 1, T}) {
      int32_t c = site_col[idx.site(x, t)];
      if (c < 0) throw std::logic_error("boundary site was eliminated");
      cols.push_back((size_t)c);
    }
  }
  return ColumnSet(std::move(cols));
}

ParityCheckSystem build_parity_checks(const DisorderGrid &grid,
                                      const InitialCondition &init) {
  const size_t L = grid.L, T = grid.T;
  if (L < 3 || T < 3) throw std::invalid_argument("grid needs L >= 3 and T >= 3");
  if (init.pin_row1.size() != L || init.pin_row2.size() != L) {
    throw std::invalid_argument("initial condition width mismatch");
  }

  // Row t holds the a value of step t, which the swap stage hands on as the b
  // value of step t - 1; rows T - 1 and T hold the final a and b values.
  // Anchor (x, t), t in [2, T-1], is the update constraint of step t - 1:
  // output (x, t+1), b inputs (x-1, t), (x, t), (x+1, t), a input (x, t-1).
  //
  // A marker at (x, u), u in [1, T-2], measures cell x at step u. The Z
  // measurement pins the pre-measurement value of the b site (x, u+1). The X
  // measurement re-randomizes the a site (x, u): the column keeps the
  // post-measurement value and the pre-measurement value becomes an internal
  // variable, eliminated before the matrix is materialized. References dated
  // before the step-u measurements (anchor outputs, b inputs, pin rows)
  // resolve to the internal variable; the a input of anchor (x, u+1) reads
  // the column. An initial pin on an unmarked site removes its column; on a
  // marked site it zeroes the pre-measurement value and the column stays.
  // Markers on rows T - 1 and T correspond to no step and are ignored.
  const size_t n_sites = L * T;
  std::vector<int32_t> pre_of(n_sites, -1);
  size_t n_pre = 0;
  for (size_t t = 1; t + 2 <= T; t++) {
    for (size_t x = 0; x < L; x++) {
      if (grid.at(x, t) == 1) pre_of[grid.site(x, t)] = (int32_t)n_pre++;
    }
  }

  ParityCheckSystem sys;
  sys.L = L;
  sys.T = T;
  sys.site_col.assign(n_sites, -1);

  auto pinned = [&](size_t x, size_t t) {
    if (t == 1) return init.pin_row1.get(x);
    if (t == 2) return init.pin_row2.get(x);
    return false;
  };
  for (size_t t = 1; t <= T; t++) {
    for (size_t x = 0; x < L; x++) {
      size_t s = grid.site(x, t);
      if (pinned(x, t) && pre_of[s] < 0) {
        sys.eliminated_sites.push_back((uint32_t)s);
      } else {
        sys.site_col[s] = (int32_t)sys.col_site.size();
        sys.col_site.push_back((uint32_t)s);
      }
    }
  }

  const size_t n_live = sys.col_site.size();
  const size_t width = n_live + n_pre;
  BitMatrix work((T - 2) * L + n_pre, width);
  size_t next_row = 0;
  auto touch = [&](size_t row, size_t x, size_t t, bool dated_pre) {
    size_t s = grid.site(x, t);
    if (dated_pre && pre_of[s] >= 0) {
      if (!pinned(x, t)) work.set(row, n_live + (size_t)pre_of[s], true);
      return;
    }
    int32_t c = sys.site_col[s];
    if (c >= 0) work.set(row, (size_t)c, true);
  };
  for (size_t t = 2; t + 1 <= T; t++) {
    for (size_t x = 0; x < L; x++) {
      size_t r = next_row++;
      touch(r, x, t + 1, true);
      touch(r, x, t, true);
      touch(r, (x + L - 1) % L, t, true);
      touch(r, (x + 1) % L, t, true);
      touch(r, x, t - 1, false);
    }
  }
  for (size_t t = 1; t + 2 <= T; t++) {
    for (size_t x = 0; x < L; x++) {
      if (grid.at(x, t) == 1) {
        size_t r = next_row++;
        touch(r, x, t + 1, true);
      }
    }
  }

  const size_t m_work = next_row;
  std::vector<char> dead(m_work, 0);
  for (size_t pv = 0; pv < n_pre; pv++) {
    size_t col = n_live + pv;
    size_t piv = m_work;
    for (size_t r = 0; r < m_work; r++) {
      if (!dead[r] && work.get(r, col)) {
        piv = r;
        break;
      }
    }
    if (piv == m_work) continue;
    for (size_t r = 0; r < m_work; r++) {
      if (r != piv && !dead[r] && work.get(r, col)) work.xor_rows(r, piv);
    }
    dead[piv] = 1;
  }

  std::vector<BitVector> kept;
  for (size_t r = 0; r < m_work; r++) {
    if (dead[r]) continue;
    BitVector row = work.row_copy(r);
    for (size_t pv = 0; pv < n_pre; pv++) {
      if (row.get(n_live + pv)) {
        throw std::logic_error("unresolved pre-measurement variable");
      }
    }
    if (row.is_zero()) continue;
    kept.push_back(std::move(row));
  }
  sys.h = BitMatrix(kept.size(), n_live);
  for (size_t r = 0; r < kept.size(); r++) {
    for (size_t c = 0; c < n_live; c++) {
      if (kept[r].get(c)) sys.h.set(r, c, true);
    }
  }
  return sys;
}

SymmetryBasis symmetry_basis(const ParityCheckSystem &sys) {
  SymmetryBasis g;
  g.basis = kernel_basis(sys.h);
  return g;
}

BitMatrix bulk_subgroup(const ParityCheckSystem &sys, const SymmetryBasis &g) {
  return subgroup_vanishing_on(g.basis, sys.boundary_columns());
}

namespace {

// Cells in the smallest circular arc covering every cell the row touches.
// Boundary columns are in ascending flat order, the row T-1 block followed by
// the row T block, so column c sits at cell c % L.
size_t circular_cell_extent(const BitMatrix &m, size_t r, size_t L) {
  std::vector<char> occ(L, 0);
  for (size_t c = 0; c < m.cols(); c++) {
    if (m.get(r, c)) occ[c % L] = 1;
  }
  std::vector<size_t> cells;
  for (size_t x = 0; x < L; x++) {
    if (occ[x]) cells.push_back(x);
  }
  if (cells.size() <= 1) return cells.size();
  size_t max_gap = 0;
  for (size_t i = 0; i < cells.size(); i++) {
    size_t next = cells[(i + 1) % cells.size()];
    max_gap = std::max(max_gap, (next + L - cells[i]) % L);
  }
  return L - max_gap + 1;
}

}  // namespace

BoundaryGroupReport boundary_quotient_generators(const ParityCheckSystem &sys,
                                                 const SymmetryBasis &g) {
  BoundaryGroupReport report;
  BitMatrix restricted = restrict_columns(g.basis, sys.boundary_columns());
  RowReduceResult rr = row_reduce(restricted);
  report.dim = rr.rank;
  report.generators = BitMatrix(rr.rank, restricted.cols());
  for (size_t r = 0; r < rr.rank; r++) {
    report.generators.set_row(r, restricted.row_copy(r));
    report.supports.push_back(
        circular_cell_extent(report.generators, r, sys.L));
  }
  return report;
}

SupportStatistics support_statistics(const BoundaryGroupReport &report, size_t L) {
  SupportStatistics st;
  st.dim = report.dim;
  st.histogram.assign(2 * L + 1, 0);
  size_t extensive = 0;
  for (size_t s : report.supports) {
    st.histogram[std::min(s, 2 * L)]++;
    if (2 * s >= L) extensive++;
  }
  st.extensive_fraction = report.dim ? double(extensive) / double(report.dim) : 0.0;
  return st;
}

}  // namespace plaq
