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

#ifndef PLAQ_REPLICA_HPP
#define PLAQ_REPLICA_HPP

#include <cstdint>
#include <vector>

#include "plaq/plaquette.hpp"

namespace plaq {

// Glued multi-copy check system. Copies are glued by column identification
// only: a glued column is shared between the copies listed in its mask, and
// no equality rows are ever added.
struct ReplicaSystem {
  BitMatrix h;
  std::vector<uint32_t> col_site;   // single-copy site per column
  std::vector<uint8_t> col_copies;  // bitmask of copies sharing the column

  size_t n() const { return h.cols(); }
  size_t m() const { return h.rows(); }
};

// Two copies sharing all boundary columns. The wavefunction-squared system:
// nullity(H2) = k2 = log2(|G| |G_B|).
ReplicaSystem build_H2(const ParityCheckSystem &sys);

// Four copies computing Tr rho_A^2: boundary pairs of cells x in [x0, x1)
// (region A) glue copies (1,4) and (2,3); the remaining boundary pairs glue
// (1,3) and (2,4).
ReplicaSystem build_H4(const ParityCheckSystem &sys, size_t x0, size_t x1);

struct Renyi2Replicas {
  size_t k2 = 0, k4 = 0;
  int64_t s2_bits = 0;  // 2*k2 - k4
};

// Order-2 Renyi entropy of the boundary region A = cells [x0, x1) at zero
// temperature, from ground-state counting of the glued systems.
Renyi2Replicas renyi2_via_replicas(const ParityCheckSystem &sys, size_t x0,
                                   size_t x1);

// Same quantity from a single copy: with r_S the rank of the symmetry basis
// restricted to boundary region S, S2 = r_A + r_Abar - r_full.
int64_t renyi2_via_groups(const ParityCheckSystem &sys, size_t x0, size_t x1);

struct GammaEstimate {
  double gamma_bits_per_site = 0.0;  // least-squares slope of mean S2 vs L
  double intercept_bits = 0.0;
  double beta_c_inverse = 0.0;  // min(alpha, 1-alpha) / (gamma * ln 2), alpha = 1/2
  std::vector<double> mean_s2;  // one entry per size
};

// Half-cut entropy scaling over random interior disorder at rate p, grids of
// size L x L with row 1 pinned, `realizations` instances per size. Needs at
// least three sizes.
GammaEstimate gamma_estimate(double p, const std::vector<size_t> &sizes,
                             size_t realizations, uint64_t seed);

}  // namespace plaq

#endif  // PLAQ_REPLICA_HPP
