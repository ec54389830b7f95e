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

#include "plaq/kmc.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

#include "plaq/rng.hpp"

namespace plaq {

FenwickTree::FenwickTree(size_t n)
    : n_(n), tree_(n + 1, 0.0), values_(n, 0.0) {}

void FenwickTree::assign(const std::vector<double> &vals) {
  if (vals.size() != n_) throw std::invalid_argument("size mismatch");
  values_ = vals;
  std::fill(tree_.begin(), tree_.end(), 0.0);
  for (size_t i = 0; i < n_; i++) {
    size_t j = i + 1;
    tree_[j] += values_[i];
    size_t parent = j + (j & (~j + 1));
    if (parent <= n_) tree_[parent] += tree_[j];
  }
}

void FenwickTree::add(size_t i, double delta) {
  values_[i] += delta;
  for (size_t j = i + 1; j <= n_; j += j & (~j + 1)) tree_[j] += delta;
}

void FenwickTree::set(size_t i, double v) {
  double delta = v - values_[i];
  values_[i] = v;
  for (size_t j = i + 1; j <= n_; j += j & (~j + 1)) tree_[j] += delta;
}

double FenwickTree::prefix(size_t i) const {
  double s = 0.0;
  for (size_t j = i + 1; j > 0; j -= j & (~j + 1)) s += tree_[j];
  return s;
}

double FenwickTree::total() const { return n_ ? prefix(n_ - 1) : 0.0; }

size_t FenwickTree::select(double target) const {
  size_t pos = 0;
  double rem = target;
  for (size_t step = std::bit_floor(n_); step > 0; step >>= 1) {
    size_t next = pos + step;
    if (next <= n_ && tree_[next] < rem) {
      pos = next;
      rem -= tree_[next];
    }
  }
  return pos < n_ ? pos : n_ - 1;
}

KmcModel::KmcModel(size_t L, double p, double beta, uint64_t disorder_seed)
    : l_(L), n_(L * L), beta_(beta), tree_(L * L) {
  if (L < 3) throw std::invalid_argument("torus needs L >= 3");
  if (p < 0.0 || p > 1.0) throw std::invalid_argument("p must be in [0,1]");
  if (beta < 0.0) throw std::invalid_argument("beta must be >= 0");
  one_body_.assign(n_, 0);
  auto rng = make_rng(disorder_seed);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  for (size_t i = 0; i < n_; i++) one_body_[i] = uni(rng) < p ? 1 : 0;
  spin_.assign(n_, 0);
  reset_derived();
}

KmcModel::KmcModel(size_t L, std::vector<uint8_t> one_body, double beta)
    : l_(L), n_(L * L), beta_(beta), one_body_(std::move(one_body)),
      tree_(L * L) {
  if (L < 3) throw std::invalid_argument("torus needs L >= 3");
  if (beta < 0.0) throw std::invalid_argument("beta must be >= 0");
  if (one_body_.size() != n_) throw std::invalid_argument("disorder size");
  spin_.assign(n_, 0);
  reset_derived();
}

void KmcModel::neighbors(size_t site, size_t out[4]) const {
  size_t x = site % l_, y = site / l_;
  size_t xm = (x + l_ - 1) % l_, xp = (x + 1) % l_;
  size_t ym = (y + l_ - 1) % l_, yp = (y + 1) % l_;
  out[0] = xm + y * l_;
  out[1] = xp + y * l_;
  out[2] = x + ym * l_;
  out[3] = x + yp * l_;
}

uint8_t KmcModel::check_parity(size_t site) const {
  uint8_t s = spin_[site];
  if (one_body_[site]) return s;
  size_t nb[4];
  neighbors(site, nb);
  return s ^ spin_[nb[0]] ^ spin_[nb[1]] ^ spin_[nb[2]] ^ spin_[nb[3]];
}

void KmcModel::reset_derived() {
  sigma_.assign(n_, 0);
  energy_ = 0;
  for (size_t i = 0; i < n_; i++) {
    sigma_[i] = check_parity(i);
    energy_ += sigma_[i] ? 2 : 0;
  }
  rebuild();
  clock_ = 0.0;
  events_ = 0;
}

void KmcModel::randomize_spins(std::mt19937_64 &rng) {
  std::uniform_int_distribution<int> coin(0, 1);
  for (size_t i = 0; i < n_; i++) spin_[i] = uint8_t(coin(rng));
  reset_derived();
}

void KmcModel::set_spins(const std::vector<uint8_t> &bits) {
  if (bits.size() != n_) throw std::invalid_argument("spin size");
  spin_ = bits;
  reset_derived();
}

int64_t KmcModel::full_energy_recount() const {
  int64_t e = 0;
  for (size_t i = 0; i < n_; i++) e += check_parity(i) ? 2 : 0;
  return e;
}

int64_t KmcModel::local_energy_delta(size_t site) const {
  // Checks containing `site`: its own, plus each neighbor's 5-body check.
  // Flipping the spin flips every such check: dE = 2 * sum of current h.
  int64_t cnt = 1, viol = sigma_[site] ? 1 : 0;
  size_t nb[4];
  neighbors(site, nb);
  for (size_t k = 0; k < 4; k++) {
    if (!one_body_[nb[k]]) {
      cnt++;
      viol += sigma_[nb[k]] ? 1 : 0;
    }
  }
  return 2 * (cnt - 2 * viol);
}

double KmcModel::rate_from_delta(int64_t de) const {
  if (std::isinf(beta_)) {
    if (de > 0) return 0.0;
    return de == 0 ? 0.5 : 1.0;
  }
  double x = beta_ * double(de);
  if (x >= 0.0) {
    double e = std::exp(-x);
    return e / (1.0 + e);
  }
  return 1.0 / (1.0 + std::exp(x));
}

double KmcModel::fresh_rate(size_t site) const {
  // Recomputed from the spins alone, bypassing the cached parities.
  int64_t cnt = 1, viol = check_parity(site) ? 1 : 0;
  size_t nb[4];
  neighbors(site, nb);
  for (size_t k = 0; k < 4; k++) {
    if (!one_body_[nb[k]]) {
      cnt++;
      viol += check_parity(nb[k]) ? 1 : 0;
    }
  }
  return rate_from_delta(2 * (cnt - 2 * viol));
}

size_t KmcModel::affected_sites(size_t site, size_t out[16]) const {
  size_t raw[32];
  size_t nr = 0;
  auto add_check_members = [&](size_t c) {
    raw[nr++] = c;
    if (!one_body_[c]) {
      size_t nb[4];
      neighbors(c, nb);
      for (size_t k = 0; k < 4; k++) raw[nr++] = nb[k];
    }
  };
  add_check_members(site);
  size_t nb[4];
  neighbors(site, nb);
  for (size_t k = 0; k < 4; k++) {
    if (!one_body_[nb[k]]) add_check_members(nb[k]);
  }
  std::sort(raw, raw + nr);
  size_t n_out = 0;
  for (size_t k = 0; k < nr; k++) {
    if (k == 0 || raw[k] != raw[k - 1]) out[n_out++] = raw[k];
  }
  return n_out;
}

void KmcModel::refresh_rate(size_t site) {
  tree_.set(site, rate_from_delta(local_energy_delta(site)));
}

KmcModel::StepResult KmcModel::kmc_step(std::mt19937_64 &rng) {
  double lambda = tree_.total();
  if (!(lambda > 0.0)) return {0, 0.0, true};
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  double u1 = 1.0 - uni(rng);  // in (0, 1]
  size_t site = tree_.select(u1 * lambda);
  double u2 = 1.0 - uni(rng);
  double dt = -std::log(u2) / lambda;
  clock_ += dt;

  spin_[site] ^= 1;
  auto touch = [&](size_t c) {
    sigma_[c] ^= 1;
    energy_ += sigma_[c] ? 2 : -2;
  };
  touch(site);
  size_t nb[4];
  neighbors(site, nb);
  for (size_t k = 0; k < 4; k++) {
    if (!one_body_[nb[k]]) touch(nb[k]);
  }
  size_t aff[16];
  size_t na = affected_sites(site, aff);
  for (size_t k = 0; k < na; k++) refresh_rate(aff[k]);

  events_++;
  if (events_ % kRebuildInterval == 0) rebuild();
  return {site, dt, false};
}

void KmcModel::rebuild() {
  std::vector<double> rates(n_);
  for (size_t i = 0; i < n_; i++) {
    rates[i] = rate_from_delta(local_energy_delta(i));
  }
  tree_.assign(rates);
}

QuenchTrace run_quench(size_t L, double p, double beta, double t_max,
                       uint64_t seed, QuenchOptions opts) {
  if (!(opts.t_min > 0.0) || !(t_max > opts.t_min)) {
    throw std::invalid_argument("need 0 < t_min < t_max");
  }
  double decades = std::log10(t_max / opts.t_min);
  size_t cap = std::max<size_t>(2, size_t(std::ceil(50.0 * decades)));
  size_t S = std::max<size_t>(2, std::min(opts.samples, cap));
  std::vector<double> grid(S);
  for (size_t k = 0; k < S; k++) {
    grid[k] = opts.t_min *
              std::pow(t_max / opts.t_min, double(k) / double(S - 1));
  }

  KmcModel model(L, p, beta, member_seed(seed, 1));
  auto rng_init = make_rng(member_seed(seed, 2));
  model.randomize_spins(rng_init);
  auto rng = make_rng(member_seed(seed, 3));

  QuenchTrace trace;
  trace.L = L;
  trace.p = p;
  trace.beta = beta;
  trace.seed = seed;
  size_t k = 0;
  while (k < S) {
    double e_before = model.energy_density();
    auto st = model.kmc_step(rng);
    if (st.completed) {
      for (; k < S; k++) {
        trace.times.push_back(grid[k]);
        trace.epsilon.push_back(e_before);
      }
      trace.completed = true;
      break;
    }
    while (k < S && grid[k] <= model.clock()) {
      trace.times.push_back(grid[k]);
      trace.epsilon.push_back(e_before);
      k++;
    }
    if (model.events() >= opts.max_events && k < S) {
      trace.truncated = true;
      break;
    }
  }
  trace.events = model.events();
  return trace;
}

std::vector<QuenchTrace> run_quench_ensemble(size_t L, double p, double beta,
                                             double t_max, uint64_t master_seed,
                                             size_t count, QuenchOptions opts) {
  std::vector<QuenchTrace> out(count);
#pragma omp parallel for schedule(dynamic)
  for (int64_t i = 0; i < int64_t(count); i++) {
    out[size_t(i)] =
        run_quench(L, p, beta, t_max, member_seed(master_seed, uint64_t(i)), opts);
  }
  return out;
}

CollapseCurves collapse_transform(const std::vector<QuenchTrace> &traces,
                                  const std::vector<double> &exponents,
                                  size_t grid_points) {
  if (traces.size() < 2) throw std::invalid_argument("need at least 2 traces");
  if (exponents.size() != traces.size()) {
    throw std::invalid_argument("one exponent per trace");
  }
  for (const QuenchTrace &t : traces) {
    if (t.times.size() < 2) throw std::invalid_argument("trace too short");
    if (t.L != traces[0].L || t.p != traces[0].p) {
      throw std::invalid_argument("traces must share L and p");
    }
  }
  for (double e : exponents) {
    if (!(e > 0.0)) throw std::invalid_argument("exponents must be positive");
  }

  std::vector<std::vector<double>> u(traces.size());
  double lo = 0.0, hi = 0.0;
  for (size_t i = 0; i < traces.size(); i++) {
    u[i].resize(traces[i].times.size());
    for (size_t j = 0; j < u[i].size(); j++) {
      u[i][j] = std::pow(traces[i].times[j], exponents[i]);
    }
    lo = std::max(lo, u[i].front());
    hi = i == 0 ? u[i].back() : std::min(hi, u[i].back());
  }
  if (!(lo < hi)) {
    throw std::runtime_error("rescaled trace windows do not overlap");
  }

  CollapseCurves out;
  out.abscissa.resize(grid_points);
  for (size_t k = 0; k < grid_points; k++) {
    out.abscissa[k] =
        lo * std::pow(hi / lo, double(k) / double(grid_points - 1));
  }
  out.curves.assign(traces.size(), std::vector<double>(grid_points));
  for (size_t i = 0; i < traces.size(); i++) {
    for (size_t k = 0; k < grid_points; k++) {
      double g = out.abscissa[k];
      auto it = std::lower_bound(u[i].begin(), u[i].end(), g);
      size_t b = std::min(size_t(it - u[i].begin()), u[i].size() - 1);
      if (b == 0) b = 1;
      size_t a = b - 1;
      double w = (std::log(g) - std::log(u[i][a])) /
                 (std::log(u[i][b]) - std::log(u[i][a]));
      w = std::clamp(w, 0.0, 1.0);
      out.curves[i][k] =
          (1.0 - w) * traces[i].epsilon[a] + w * traces[i].epsilon[b];
    }
  }

  double acc = 0.0;
  size_t pairs = 0;
  for (size_t i = 0; i < traces.size(); i++) {
    for (size_t j = i + 1; j < traces.size(); j++) {
      double d2 = 0.0;
      for (size_t k = 0; k < grid_points; k++) {
        double d = out.curves[i][k] - out.curves[j][k];
        d2 += d * d;
      }
      acc += std::sqrt(d2 / double(grid_points));
      pairs++;
    }
  }
  out.score = acc / double(pairs);
  return out;
}

CollapseCurves collapse_transform(const std::vector<QuenchTrace> &traces,
                                  size_t grid_points) {
  std::vector<double> exponents;
  exponents.reserve(traces.size());
  for (const QuenchTrace &t : traces) {
    if (!(t.beta > 0.0)) throw std::invalid_argument("trace needs beta > 0");
    exponents.push_back(1.0 / t.beta);
  }
  return collapse_transform(traces, exponents, grid_points);
}

StationaryCheckResult stationary_check(size_t L, double p, double beta,
                                       uint64_t n_events, uint64_t seed) {
  if (L * L > 9) throw std::invalid_argument("exact check needs L*L <= 9");
  KmcModel model(L, p, beta, member_seed(seed, 1));
  auto rng_init = make_rng(member_seed(seed, 2));
  model.randomize_spins(rng_init);
  auto rng = make_rng(member_seed(seed, 3));

  const size_t n = model.n();
  const size_t n_cfg = size_t(1) << n;
  StationaryCheckResult out;
  out.empirical.assign(n_cfg, 0.0);

  uint64_t burn = n_events / 10;
  for (uint64_t ev = 0; ev < n_events; ev++) {
    size_t idx = 0;
    for (size_t i = 0; i < n; i++) idx |= size_t(model.spins()[i]) << i;
    auto st = model.kmc_step(rng);
    if (st.completed) {
      // Absorbing state: all remaining time accrues here.
      std::fill(out.empirical.begin(), out.empirical.end(), 0.0);
      out.empirical[idx] = 1.0;
      break;
    }
    if (ev >= burn) out.empirical[idx] += st.dt;
  }
  double tot = 0.0;
  for (double v : out.empirical) tot += v;
  if (tot > 0.0) {
    for (double &v : out.empirical) v /= tot;
  }

  out.exact.assign(n_cfg, 0.0);
  std::vector<uint8_t> cfg(n);
  std::vector<int64_t> energies(n_cfg, 0);
  int64_t e_min = INT64_MAX;
  KmcModel scratch(L, model.one_body(), std::isinf(beta) ? 0.0 : beta);
  for (size_t c = 0; c < n_cfg; c++) {
    for (size_t i = 0; i < n; i++) cfg[i] = uint8_t((c >> i) & 1);
    scratch.set_spins(cfg);
    energies[c] = scratch.energy();
    e_min = std::min(e_min, energies[c]);
  }
  double z = 0.0;
  for (size_t c = 0; c < n_cfg; c++) {
    double w;
    if (std::isinf(beta)) {
      w = energies[c] == e_min ? 1.0 : 0.0;
    } else {
      w = std::exp(-beta * double(energies[c] - e_min));
    }
    out.exact[c] = w;
    z += w;
  }
  for (double &v : out.exact) v /= z;

  double tv = 0.0;
  for (size_t c = 0; c < n_cfg; c++) {
    tv += std::fabs(out.exact[c] - out.empirical[c]);
  }
  out.tv_distance = 0.5 * tv;
  return out;
}

std::vector<Plateau> find_plateaus(const QuenchTrace &trace,
                                   PlateauParams params) {
  const std::vector<double> &t = trace.times;
  const std::vector<double> &e = trace.epsilon;
  std::vector<Plateau> out;
  size_t S = t.size();
  size_t i = 0;
  double last_mean = 0.0;
  while (i < S) {
    size_t best = i;
    double mn = e[i], mx = e[i];
    for (size_t j = i + 1; j < S; j++) {
      mn = std::min(mn, e[j]);
      mx = std::max(mx, e[j]);
      double dec = std::log10(t[j] / t[i]);
      if (mx - mn >
          params.max_range_per_decade * std::max(dec, params.min_decades)) {
        break;
      }
      if (dec >= params.min_decades) best = j;
    }
    if (best > i) {
      double mean = 0.0;
      for (size_t j = i; j <= best; j++) mean += e[j];
      mean /= double(best - i + 1);
      if (out.empty() || last_mean - mean >= params.min_separation) {
        out.push_back({t[i], t[best], mean});
        last_mean = mean;
      }
      i = best + 1;
    } else {
      i++;
    }
  }
  return out;
}

}  // namespace plaq
