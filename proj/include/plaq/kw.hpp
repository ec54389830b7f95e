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

#ifndef PLAQ_KW_HPP
#define PLAQ_KW_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "plaq/replica.hpp"

namespace plaq {

// Exact-enumeration size limit exceeded. Never silently truncated.
struct CapacityError : std::runtime_error {
  explicit CapacityError(const std::string &what) : std::runtime_error(what) {}
};

inline constexpr size_t kDefaultQMax = 24;  // dual enumeration, 2^Q terms
inline constexpr size_t kDefaultNMax = 20;  // direct enumeration, 2^N terms

// Independent rows R with R * H^T = 0: products of checks that multiply to
// the identity constraint.
struct RedundancyBasis {
  BitMatrix r;  // Q x M over the check space
  size_t n_parent = 0;

  size_t q() const { return r.rows(); }
  size_t m() const { return r.cols(); }
};

RedundancyBasis redundancy_basis(const BitMatrix &h);
RedundancyBasis redundancy_basis(const ParityCheckSystem &sys);
RedundancyBasis redundancy_basis(const ReplicaSystem &rep);

// The transposed basis viewed as a parity-check matrix on Q dual spins,
// with the matched temperature records.
struct DualModel {
  BitMatrix rt;  // M rows (dual checks) x Q columns (dual spins)
  double beta = 0.0;
  double alpha = 0.0;      // tanh(beta)
  double beta_dual = 0.0;  // exp(-2*beta_dual) = tanh(beta)
};

DualModel make_dual_model(const RedundancyBasis &basis, double beta);

// log of sum over all 2^Q dual configurations q of alpha^{|R^T q|}.
// Exact enumeration; alpha in [0, 1]; throws CapacityError when Q > q_max.
double dual_partition_log(const RedundancyBasis &basis, double alpha,
                          size_t q_max = kDefaultQMax);

// counts[v] = number of the 2^N spin configurations violating exactly v of
// the M checks. Throws CapacityError when N > n_max.
std::vector<uint64_t> violation_histogram(const BitMatrix &h,
                                          size_t n_max = kDefaultNMax);

// log of sum over counts of counts[v] * exp(-beta*v), by log-sum-exp.
double log_z_from_histogram(const std::vector<uint64_t> &counts, double beta);

// log of sum over all 2^N spin configurations of exp(-beta * #violated).
double partition_log_bruteforce(const BitMatrix &h, double beta,
                                size_t n_max = kDefaultNMax);
double partition_log_bruteforce(const ParityCheckSystem &sys, double beta,
                                size_t n_max = kDefaultNMax);

// Both sides of the duality for the +-1 product convention, where
// log Z(beta) = beta*M + log of the violation-count sum at 2*beta:
// residual = |log Z - (N log 2 + M log cosh beta + log Z_R(tanh beta))|.
struct KwIdentityResult {
  size_t q = 0;
  double log_z_brute = 0.0;
  double log_z_dual = 0.0;
  double residual = 0.0;
};

KwIdentityResult kw_identity_check(const BitMatrix &h, double beta,
                                   size_t n_max = kDefaultNMax,
                                   size_t q_max = kDefaultQMax);
KwIdentityResult kw_identity_check(const ParityCheckSystem &sys, double beta,
                                   size_t n_max = kDefaultNMax,
                                   size_t q_max = kDefaultQMax);

struct FiniteBetaOptions {
  size_t q_max = kDefaultQMax;
  size_t n_max = kDefaultNMax;
};

// Order-2 Renyi entropy of boundary cells [x0, x1) at inverse temperature
// beta (violation-count convention), in nats: 2 log Z(H2) - log Z(H4) with
// every prefactor of both glued systems included. Each glued partition log
// is evaluated by dual enumeration when its redundancy count permits, else
// by direct enumeration; if neither fits, throws CapacityError naming both
// limits.
double finite_beta_renyi2(const ParityCheckSystem &sys, size_t x0, size_t x1,
                          double beta, FiniteBetaOptions opts = {});

// Forced-measurement strength equivalent to inverse temperature beta, and
// the dual temperature: gamma = beta' = -0.5 * log tanh beta.
struct WeakMeasurementParams {
  double gamma = 0.0;
  double beta_dual = 0.0;
};

WeakMeasurementParams weak_measurement_params(double beta);

// Support sizes of the dual checks (rows of R^T). counts[w] = number of
// dual checks acting on exactly w dual spins; empty when Q = 0.
// no_check_fraction = fraction of dual spins whose incident dual checks are
// all single-spin terms, so the spin couples to no other spin.
struct DualWeightHistogram {
  std::vector<uint64_t> counts;
  size_t dual_spins = 0;
  size_t dual_checks = 0;
  double no_check_fraction = 0.0;
};

DualWeightHistogram dual_check_weight_histogram(const RedundancyBasis &basis);

}  // namespace plaq

#endif  // PLAQ_KW_HPP
