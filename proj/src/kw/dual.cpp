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

#include "plaq/kw.hpp"

#include <bit>
#include <cmath>
#include <limits>

namespace plaq {
namespace {

constexpr uint64_t kBlockSize = uint64_t(1) << 16;
constexpr double kLn2 = 0.6931471805599453094;

double log_cosh(double x) {
  double a = std::fabs(x);
  return a + std::log1p(std::exp(-2.0 * a)) - kLn2;
}

// Kahan accumulator. Blocks are combined serially in index order, so sums
// do not depend on the worker count.
struct Kahan {
  double sum = 0.0, c = 0.0;
  void add(double v) {
    double y = v - c;
    double t = sum + y;
    c = (t - sum) - y;
    sum = t;
  }
};

}  // namespace

RedundancyBasis redundancy_basis(const BitMatrix &h) {
  RedundancyBasis basis;
  basis.r = left_kernel_basis(h);
  basis.n_parent = h.cols();
  return basis;
}

RedundancyBasis redundancy_basis(const ParityCheckSystem &sys) {
  return redundancy_basis(sys.h);
}

RedundancyBasis redundancy_basis(const ReplicaSystem &rep) {
  return redundancy_basis(rep.h);
}

DualModel make_dual_model(const RedundancyBasis &basis, double beta) {
  if (beta < 0.0) throw std::invalid_argument("beta must be >= 0");
  DualModel d;
  d.rt = basis.r.transposed();
  d.beta = beta;
  d.alpha = std::tanh(beta);
  d.beta_dual = d.alpha > 0.0 ? -0.5 * std::log(d.alpha)
                              : std::numeric_limits<double>::infinity();
  return d;
}

double dual_partition_log(const RedundancyBasis &basis, double alpha,
                          size_t q_max) {
  if (alpha < 0.0 || alpha > 1.0) {
    throw std::invalid_argument("alpha must be in [0,1]");
  }
  const size_t q = basis.q();
  if (q > q_max) {
    throw CapacityError("dual enumeration over 2^Q terms: Q=" +
                        std::to_string(q) + " exceeds limit " +
                        std::to_string(q_max));
  }
  if (q == 0) return 0.0;
  const size_t m = basis.m();

  std::vector<BitVector> rows;
  rows.reserve(q);
  for (size_t i = 0; i < q; i++) rows.push_back(basis.r.row_copy(i));
  std::vector<double> pw(m + 1);
  pw[0] = 1.0;
  for (size_t w = 1; w <= m; w++) {
    pw[w] = alpha == 0.0 ? 0.0 : std::pow(alpha, double(w));
  }

  const uint64_t total = uint64_t(1) << q;
  const size_t n_blocks = size_t((total + kBlockSize - 1) / kBlockSize);
  std::vector<double> block_sum(n_blocks, 0.0);
#pragma omp parallel for schedule(static)
  for (int64_t b = 0; b < int64_t(n_blocks); b++) {
    const uint64_t i0 = uint64_t(b) * kBlockSize;
    const uint64_t i1 = std::min(total, i0 + kBlockSize);
    const uint64_t g0 = i0 ^ (i0 >> 1);
    BitVector u(m);
    for (size_t i = 0; i < q; i++) {
      if ((g0 >> i) & 1) u.xor_with(rows[i]);
    }
    size_t w = u.popcount();
    Kahan acc;
    for (uint64_t i = i0; i < i1; i++) {
      acc.add(pw[w]);
      if (i + 1 < i1) {
        u.xor_with(rows[std::countr_zero(i + 1)]);
        w = u.popcount();
      }
    }
    block_sum[size_t(b)] = acc.sum;
  }
  Kahan acc;
  for (double s : block_sum) acc.add(s);
  return std::log(acc.sum);
}

std::vector<uint64_t> violation_histogram(const BitMatrix &h, size_t n_max) {
  const size_t n = h.cols(), m = h.rows();
  if (n > n_max) {
    throw CapacityError("direct enumeration over 2^N configurations: N=" +
                        std::to_string(n) + " exceeds limit " +
                        std::to_string(n_max));
  }
  std::vector<BitVector> col(n, BitVector(m));
  for (size_t r = 0; r < m; r++) {
    for (size_t j = 0; j < n; j++) {
      if (h.get(r, j)) col[j].set(r, true);
    }
  }

  const uint64_t total = uint64_t(1) << n;
  const size_t n_blocks = size_t((total + kBlockSize - 1) / kBlockSize);
  std::vector<std::vector<uint64_t>> block_hist(
      n_blocks, std::vector<uint64_t>(m + 1, 0));
#pragma omp parallel for schedule(static)
  for (int64_t b = 0; b < int64_t(n_blocks); b++) {
    const uint64_t i0 = uint64_t(b) * kBlockSize;
    const uint64_t i1 = std::min(total, i0 + kBlockSize);
    const uint64_t g0 = i0 ^ (i0 >> 1);
    BitVector y(m);
    for (size_t j = 0; j < n; j++) {
      if ((g0 >> j) & 1) y.xor_with(col[j]);
    }
    std::vector<uint64_t> &hist = block_hist[size_t(b)];
    for (uint64_t i = i0; i < i1; i++) {
      hist[y.popcount()]++;
      if (i + 1 < i1) y.xor_with(col[std::countr_zero(i + 1)]);
    }
  }
  std::vector<uint64_t> counts(m + 1, 0);
  for (const auto &hist : block_hist) {
    for (size_t v = 0; v <= m; v++) counts[v] += hist[v];
  }
  return counts;
}

double log_z_from_histogram(const std::vector<uint64_t> &counts, double beta) {
  double top = -std::numeric_limits<double>::infinity();
  for (size_t v = 0; v < counts.size(); v++) {
    if (counts[v] == 0) continue;
    top = std::max(top, std::log(double(counts[v])) - beta * double(v));
  }
  if (!std::isfinite(top)) throw std::logic_error("empty histogram");
  Kahan acc;
  for (size_t v = 0; v < counts.size(); v++) {
    if (counts[v] == 0) continue;
    acc.add(std::exp(std::log(double(counts[v])) - beta * double(v) - top));
  }
  return top + std::log(acc.sum);
}

double partition_log_bruteforce(const BitMatrix &h, double beta,
                                size_t n_max) {
  return log_z_from_histogram(violation_histogram(h, n_max), beta);
}

double partition_log_bruteforce(const ParityCheckSystem &sys, double beta,
                                size_t n_max) {
  return partition_log_bruteforce(sys.h, beta, n_max);
}

KwIdentityResult kw_identity_check(const BitMatrix &h, double beta,
                                   size_t n_max, size_t q_max) {
  if (beta < 0.0) throw std::invalid_argument("beta must be >= 0");
  const double n = double(h.cols()), m = double(h.rows());
  KwIdentityResult out;
  // Product-convention partition log from the violation counts: each
  // satisfied check contributes e^{beta}, each violated one e^{-beta}.
  out.log_z_brute =
      beta * m + log_z_from_histogram(violation_histogram(h, n_max), 2.0 * beta);
  RedundancyBasis basis = redundancy_basis(h);
  out.q = basis.q();
  out.log_z_dual = n * kLn2 + m * log_cosh(beta) +
                   dual_partition_log(basis, std::tanh(beta), q_max);
  out.residual = std::fabs(out.log_z_brute - out.log_z_dual);
  return out;
}

KwIdentityResult kw_identity_check(const ParityCheckSystem &sys, double beta,
                                   size_t n_max, size_t q_max) {
  return kw_identity_check(sys.h, beta, n_max, q_max);
}

namespace {

// Partition log of one glued system, all prefactors included. Dual route
// when the redundancy count fits, else direct enumeration.
double glued_partition_log(const BitMatrix &h, double beta,
                           const FiniteBetaOptions &opts, const char *label) {
  const double n = double(h.cols()), m = double(h.rows());
  RedundancyBasis basis = redundancy_basis(h);
  if (basis.q() <= opts.q_max) {
    return -beta * m / 2.0 + n * kLn2 + m * log_cosh(beta / 2.0) +
           dual_partition_log(basis, std::tanh(beta / 2.0), opts.q_max);
  }
  if (h.cols() <= opts.n_max) return partition_log_bruteforce(h, beta, opts.n_max);
  throw CapacityError(std::string(label) + ": Q=" + std::to_string(basis.q()) +
                      " exceeds dual limit " + std::to_string(opts.q_max) +
                      " and N=" + std::to_string(h.cols()) +
                      " exceeds direct limit " + std::to_string(opts.n_max) +
                      "; feasible sizes need Q <= " + std::to_string(opts.q_max) +
                      " or N <= " + std::to_string(opts.n_max));
}

}  // namespace

double finite_beta_renyi2(const ParityCheckSystem &sys, size_t x0, size_t x1,
                          double beta, FiniteBetaOptions opts) {
  if (beta < 0.0) throw std::invalid_argument("beta must be >= 0");
  ReplicaSystem h2 = build_H2(sys);
  ReplicaSystem h4 = build_H4(sys, x0, x1);
  double log_z2 = glued_partition_log(h2.h, beta, opts, "H2");
  double log_z4 = glued_partition_log(h4.h, beta, opts, "H4");
  return 2.0 * log_z2 - log_z4;
}

WeakMeasurementParams weak_measurement_params(double beta) {
  if (!(beta > 0.0)) throw std::invalid_argument("beta must be > 0");
  WeakMeasurementParams out;
  out.gamma = -0.5 * std::log(std::tanh(beta));
  out.beta_dual = out.gamma;
  return out;
}

DualWeightHistogram dual_check_weight_histogram(const RedundancyBasis &basis) {
  DualWeightHistogram out;
  out.dual_spins = basis.q();
  out.dual_checks = basis.m();
  if (basis.q() == 0) return out;
  std::vector<size_t> weight(basis.m(), 0);
  for (size_t i = 0; i < basis.m(); i++) {
    for (size_t qq = 0; qq < basis.q(); qq++) {
      if (basis.r.get(qq, i)) weight[i]++;
    }
  }
  out.counts.assign(basis.q() + 1, 0);
  for (size_t w : weight) out.counts[w]++;
  size_t decoupled = 0;
  for (size_t qq = 0; qq < basis.q(); qq++) {
    bool coupled = false;
    for (size_t i = 0; i < basis.m() && !coupled; i++) {
      if (basis.r.get(qq, i) && weight[i] > 1) coupled = true;
    }
    if (!coupled) decoupled++;
  }
  out.no_check_fraction = double(decoupled) / double(basis.q());
  return out;
}

}  // namespace plaq
