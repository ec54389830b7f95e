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

#ifndef PLAQ_KMC_HPP
#define PLAQ_KMC_HPP

#include <cstdint>
#include <random>
#include <vector>

namespace plaq {

// Positive-weight prefix sums with O(log n) update and inverse-CDF search.
class FenwickTree {
 public:
  explicit FenwickTree(size_t n);

  size_t size() const { return n_; }
  void assign(const std::vector<double> &vals);
  void add(size_t i, double delta);
  void set(size_t i, double v);
  double value(size_t i) const { return values_[i]; }
  double prefix(size_t i) const;  // sum of values[0..i]
  double total() const;
  // Smallest i with prefix(i) >= target; clamped to the last index.
  size_t select(double target) const;

 private:
  size_t n_;
  std::vector<double> tree_;  // 1-based
  std::vector<double> values_;
};

// Torus spin model with one check per site: with probability p the check is
// the site's own spin, otherwise the product over the 5-point stencil.
// Energies use the 0-or-2-per-check convention E = sum_i (1 - h_i), h_i in
// {-1, +1}. Dynamics: rejection-free single-flip Glauber at inverse
// temperature beta, flip rate 1/(1+exp(beta*dE)).
class KmcModel {
 public:
  static constexpr uint64_t kRebuildInterval = 1000000;

  KmcModel(size_t L, double p, double beta, uint64_t disorder_seed);
  KmcModel(size_t L, std::vector<uint8_t> one_body, double beta);

  size_t side() const { return l_; }
  size_t n() const { return n_; }
  double beta() const { return beta_; }
  const std::vector<uint8_t> &one_body() const { return one_body_; }
  const std::vector<uint8_t> &spins() const { return spin_; }

  void randomize_spins(std::mt19937_64 &rng);
  void set_spins(const std::vector<uint8_t> &bits);  // 1 = down

  int64_t energy() const { return energy_; }
  int64_t full_energy_recount() const;
  double energy_density() const { return double(energy_) / double(n_); }

  int64_t local_energy_delta(size_t site) const;
  double stored_rate(size_t site) const { return tree_.value(site); }
  double fresh_rate(size_t site) const;
  double total_rate() const { return tree_.total(); }
  const FenwickTree &rate_tree() const { return tree_; }

  double clock() const { return clock_; }
  uint64_t events() const { return events_; }

  struct StepResult {
    size_t site = 0;
    double dt = 0.0;
    bool completed = false;  // total rate vanished; nothing was flipped
  };

  // One rejection-free event: pick a site by rate, advance the clock by an
  // exponential waiting time at the current total rate, flip, and refresh
  // the affected rates (at most 13 sites).
  StepResult kmc_step(std::mt19937_64 &rng);

  // Recompute every rate from the spins and reload the tree.
  void rebuild();

 private:
  size_t l_, n_;
  double beta_;
  std::vector<uint8_t> one_body_;
  std::vector<uint8_t> spin_;   // 1 = down
  std::vector<uint8_t> sigma_;  // parity of check i; h_i = 1 - 2*sigma_i
  FenwickTree tree_;
  int64_t energy_ = 0;
  double clock_ = 0.0;
  uint64_t events_ = 0;

  void neighbors(size_t site, size_t out[4]) const;
  uint8_t check_parity(size_t site) const;
  void reset_derived();
  double rate_from_delta(int64_t de) const;
  size_t affected_sites(size_t site, size_t out[16]) const;
  void refresh_rate(size_t site);
};

struct QuenchTrace {
  std::vector<double> times;
  std::vector<double> epsilon;  // energy density at each sample time
  size_t L = 0;
  double p = 0.0;
  double beta = 0.0;
  uint64_t seed = 0;
  uint64_t events = 0;
  bool completed = false;  // dynamics froze before t_max
  bool truncated = false;  // event budget ran out before t_max
};

struct QuenchOptions {
  size_t samples = 50;
  double t_min = 1e-2;
  uint64_t max_events = UINT64_MAX;
};

// Random initial spins, KMC to clock time t_max, energy density recorded on
// a log-spaced time grid with last-value-before semantics.
QuenchTrace run_quench(size_t L, double p, double beta, double t_max,
                       uint64_t seed, QuenchOptions opts = {});

// Independent quenches with per-member seeds derived from the master seed.
std::vector<QuenchTrace> run_quench_ensemble(size_t L, double p, double beta,
                                             double t_max, uint64_t master_seed,
                                             size_t count,
                                             QuenchOptions opts = {});

struct CollapseCurves {
  std::vector<double> abscissa;  // common rescaled-time grid, log-spaced
  std::vector<std::vector<double>> curves;
  double score = 0.0;  // mean pairwise L2 distance on the overlap window
};

// Re-grids each trace onto t^{exponent} over the shared overlap window and
// scores the collapse. Traces must share (L, p); windows must overlap.
CollapseCurves collapse_transform(const std::vector<QuenchTrace> &traces,
                                  const std::vector<double> &exponents,
                                  size_t grid_points = 200);
// Exponents 1/beta_i from the trace metadata.
CollapseCurves collapse_transform(const std::vector<QuenchTrace> &traces,
                                  size_t grid_points = 200);

struct StationaryCheckResult {
  double tv_distance = 0.0;
  std::vector<double> exact;      // Boltzmann weights, normalized
  std::vector<double> empirical;  // time-weighted occupation, normalized
};

// Time-weighted occupation over all 2^(L*L) configurations against the
// exact Boltzmann distribution. Requires L*L <= 9.
StationaryCheckResult stationary_check(size_t L, double p, double beta,
                                       uint64_t n_events, uint64_t seed);

struct Plateau {
  double t_start = 0.0, t_end = 0.0;
  double eps_mean = 0.0;
};

struct PlateauParams {
  double max_range_per_decade = 0.012;  // epsilon spread per log10-time decade
  double min_decades = 1.0;
  double min_separation = 0.015;  // epsilon drop between reported plateaus
};

// Maximal flat windows of the trace in log10 time, kept only when the mean
// drops by at least min_separation from the previous reported plateau.
std::vector<Plateau> find_plateaus(const QuenchTrace &trace,
                                   PlateauParams params = {});

}  // namespace plaq

#endif  // PLAQ_KMC_HPP
