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

#include "plaq/replica.hpp"

#include <cmath>
#include <stdexcept>

#include "plaq/rng.hpp"

namespace plaq {
namespace {

constexpr size_t kNoCol = static_cast<size_t>(-1);

// Assembles the glued matrix given, per copy, the target column of every
// single-copy column. Maps must agree exactly on glued columns.
ReplicaSystem assemble(const ParityCheckSystem &sys,
                       const std::vector<std::vector<size_t>> &col_map,
                       size_t n_glued,
                       const std::vector<uint32_t> &col_site,
                       const std::vector<uint8_t> &col_copies) {
  const size_t copies = col_map.size();
  ReplicaSystem rep;
  rep.h = BitMatrix(copies * sys.m(), n_glued);
  rep.col_site = col_site;
  rep.col_copies = col_copies;
  for (size_t c = 0; c < copies; c++) {
    for (size_t r = 0; r < sys.m(); r++) {
      for (size_t j = 0; j < sys.n(); j++) {
        if (sys.h.get(r, j)) rep.h.set(c * sys.m() + r, col_map[c][j], true);
      }
    }
  }
  return rep;
}

}  // namespace

ReplicaSystem build_H2(const ParityCheckSystem &sys) {
  const size_t n = sys.n();
  std::vector<char> is_boundary(n, 0);
  ColumnSet boundary = sys.boundary_columns();
  for (size_t i = 0; i < boundary.size(); i++) is_boundary[boundary[i]] = 1;

  std::vector<std::vector<size_t>> col_map(2, std::vector<size_t>(n, kNoCol));
  std::vector<uint32_t> col_site;
  std::vector<uint8_t> col_copies;
  size_t next = 0;
  for (size_t c = 0; c < 2; c++) {
    for (size_t j = 0; j < n; j++) {
      if (is_boundary[j]) continue;
      col_map[c][j] = next++;
      col_site.push_back(static_cast<uint32_t>(sys.col_site[j]));
      col_copies.push_back(uint8_t(1u << c));
    }
  }
  for (size_t j = 0; j < n; j++) {
    if (!is_boundary[j]) continue;
    col_map[0][j] = col_map[1][j] = next++;
    col_site.push_back(static_cast<uint32_t>(sys.col_site[j]));
    col_copies.push_back(0b11);
  }
  return assemble(sys, col_map, next, col_site, col_copies);
}

ReplicaSystem build_H4(const ParityCheckSystem &sys, size_t x0, size_t x1) {
  if (!(x0 <= x1 && x1 <= sys.L)) throw std::invalid_argument("bad region");
  const size_t n = sys.n();
  // 0 = bulk, 1 = boundary pair of an A cell, 2 = boundary pair outside A
  std::vector<uint8_t> kind(n, 0);
  ColumnSet boundary = sys.boundary_columns();
  for (size_t i = 0; i < boundary.size(); i++) {
    size_t j = boundary[i];
    size_t x = sys.col_site[j] % sys.L;
    kind[j] = (x0 <= x && x < x1) ? 1 : 2;
  }

  std::vector<std::vector<size_t>> col_map(4, std::vector<size_t>(n, kNoCol));
  std::vector<uint32_t> col_site;
  std::vector<uint8_t> col_copies;
  size_t next = 0;
  auto add = [&](size_t j, uint8_t mask) {
    size_t id = next++;
    for (size_t c = 0; c < 4; c++) {
      if (mask & (1u << c)) col_map[c][j] = id;
    }
    col_site.push_back(static_cast<uint32_t>(sys.col_site[j]));
    col_copies.push_back(mask);
  };
  for (size_t c = 0; c < 4; c++) {
    for (size_t j = 0; j < n; j++) {
      if (kind[j] == 0) add(j, uint8_t(1u << c));
    }
  }
  for (size_t j = 0; j < n; j++) {
    if (kind[j] == 1) {  // glue copies (1,4) and (2,3)
      add(j, 0b1001);
      add(j, 0b0110);
    } else if (kind[j] == 2) {  // glue copies (1,3) and (2,4)
      add(j, 0b0101);
      add(j, 0b1010);
    }
  }
  return assemble(sys, col_map, next, col_site, col_copies);
}

Renyi2Replicas renyi2_via_replicas(const ParityCheckSystem &sys, size_t x0,
                                   size_t x1) {
  ReplicaSystem h2 = build_H2(sys);
  ReplicaSystem h4 = build_H4(sys, x0, x1);
  Renyi2Replicas out;
  out.k2 = h2.n() - rank_of(h2.h);
  out.k4 = h4.n() - rank_of(h4.h);
  out.s2_bits = 2 * static_cast<int64_t>(out.k2) -
                static_cast<int64_t>(out.k4);
  return out;
}

int64_t renyi2_via_groups(const ParityCheckSystem &sys, size_t x0, size_t x1) {
  if (!(x0 <= x1 && x1 <= sys.L)) throw std::invalid_argument("bad region");
  SymmetryBasis basis = symmetry_basis(sys);
  std::vector<size_t> comp_cols;
  for (size_t x = 0; x < sys.L; x++) {
    if (x0 <= x && x < x1) continue;
    for (size_t t = sys.T - 1; t <= sys.T; t++) {
      int32_t col = sys.site_col[x + sys.L * (t - 1)];
      if (col >= 0) comp_cols.push_back(static_cast<size_t>(col));
    }
  }
  size_t r_a = projected_rank(basis.basis, sys.boundary_region(x0, x1));
  size_t r_ab = projected_rank(basis.basis, ColumnSet(comp_cols));
  size_t r_full = projected_rank(basis.basis, sys.boundary_columns());
  return static_cast<int64_t>(r_a) + static_cast<int64_t>(r_ab) -
         static_cast<int64_t>(r_full);
}

GammaEstimate gamma_estimate(double p, const std::vector<size_t> &sizes,
                             size_t realizations, uint64_t seed) {
  if (sizes.size() < 3) throw std::invalid_argument("need at least 3 sizes");
  if (realizations == 0) throw std::invalid_argument("need realizations > 0");
  GammaEstimate out;
  for (size_t i = 0; i < sizes.size(); i++) {
    size_t L = sizes[i];
    if (L < 4 || L % 2 != 0) throw std::invalid_argument("sizes must be even, >= 4");
    double acc = 0.0;
    for (size_t r = 0; r < realizations; r++) {
      DisorderGrid g = DisorderGrid::random_interior(
          L, L, p, member_seed(seed, i * realizations + r));
      ParityCheckSystem sys =
          build_parity_checks(g, InitialCondition::fix_row1(L));
      acc += static_cast<double>(renyi2_via_groups(sys, 0, L / 2));
    }
    out.mean_s2.push_back(acc / static_cast<double>(realizations));
  }
  // least squares for mean_s2 = gamma * L + c
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double nn = static_cast<double>(sizes.size());
  for (size_t i = 0; i < sizes.size(); i++) {
    double x = static_cast<double>(sizes[i]);
    sx += x;
    sy += out.mean_s2[i];
    sxx += x * x;
    sxy += x * out.mean_s2[i];
  }
  out.gamma_bits_per_site = (nn * sxy - sx * sy) / (nn * sxx - sx * sx);
  out.intercept_bits = (sy - out.gamma_bits_per_site * sx) / nn;
  if (out.gamma_bits_per_site > 0) {
    out.beta_c_inverse = 0.5 / (out.gamma_bits_per_site * std::log(2.0));
  }
  return out;
}

}  // namespace plaq
