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

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "plaq/kmc.hpp"
#include "plaq/rng.hpp"

using namespace plaq;

namespace {

QuenchTrace synthetic_trace(const std::vector<double> &times,
                            const std::vector<double> &eps, size_t L = 8,
                            double p = 0.0, double beta = 1.0) {
  QuenchTrace t;
  t.times = times;
  t.epsilon = eps;
  t.L = L;
  t.p = p;
  t.beta = beta;
  return t;
}

std::vector<double> log_grid(double lo, double hi, size_t n) {
  std::vector<double> out(n);
  for (size_t i = 0; i < n; i++) {
    out[i] = lo * std::pow(hi / lo, double(i) / double(n - 1));
  }
  return out;
}

}  // namespace

TEST_CASE("fenwick prefix sums match direct accumulation") {
  auto rng = make_rng(41);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  FenwickTree tree(37);
  std::vector<double> vals(37);
  for (size_t i = 0; i < 37; i++) vals[i] = u(rng);
  tree.assign(vals);
  for (int round = 0; round < 3; round++) {
    double acc = 0.0;
    for (size_t i = 0; i < 37; i++) {
      acc += vals[i];
      CHECK(tree.prefix(i) == doctest::Approx(acc).epsilon(1e-12));
      CHECK(tree.value(i) == vals[i]);
    }
    CHECK(tree.total() == doctest::Approx(acc).epsilon(1e-12));
    for (int k = 0; k < 10; k++) {
      size_t i = size_t(u(rng) * 37);
      double v = u(rng);
      tree.set(i, v);
      vals[i] = v;
    }
  }
}

TEST_CASE("fenwick select inverts the prefix sums") {
  FenwickTree tree(4);
  tree.assign({1.0, 0.0, 2.0, 1.0});
  CHECK(tree.select(0.5) == 0);
  CHECK(tree.select(1.0) == 0);
  CHECK(tree.select(1.0000001) == 2);
  CHECK(tree.select(3.0) == 2);
  CHECK(tree.select(3.5) == 3);
  CHECK(tree.select(100.0) == 3);
}

TEST_CASE("selection frequencies follow the rates") {
  FenwickTree tree(2);
  tree.assign({0.75, 0.25});
  auto rng = make_rng(42);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const int n = 100000;
  int first = 0;
  for (int i = 0; i < n; i++) {
    if (tree.select(u(rng) * tree.total()) == 0) first++;
  }
  // 5 sigma around the 3:1 mean, sigma = sqrt(n * 0.75 * 0.25).
  CHECK(std::abs(first - 75000) < 5.0 * std::sqrt(n * 0.1875));
}

TEST_CASE("local energy deltas in the uniform state") {
  KmcModel plaquettes(6, 0.0, 1.0, 1);
  for (size_t s = 0; s < plaquettes.n(); s++) {
    CHECK(plaquettes.local_energy_delta(s) == 10);
  }
  KmcModel fields(6, 1.0, 1.0, 1);
  for (size_t s = 0; s < fields.n(); s++) {
    CHECK(fields.local_energy_delta(s) == 2);
  }
  CHECK(plaquettes.energy() == 0);
  CHECK(fields.energy() == 0);
}

TEST_CASE("energy delta is realized by the flip") {
  auto rng = make_rng(43);
  KmcModel model(5, 0.4, 0.7, 9);
  model.randomize_spins(rng);
  std::vector<uint8_t> spins = model.spins();
  for (size_t s = 0; s < model.n(); s++) {
    int64_t de = model.local_energy_delta(s);
    int64_t before = model.energy();
    std::vector<uint8_t> flipped = spins;
    flipped[s] ^= 1;
    model.set_spins(flipped);
    CHECK(model.energy() == before + de);
    model.set_spins(spins);
    CHECK(model.local_energy_delta(s) == de);
  }
}

TEST_CASE("incremental energy and rates stay exact over many events") {
  auto rng = make_rng(44);
  KmcModel model(8, 0.3, 0.8, 17);
  model.randomize_spins(rng);
  CHECK(model.energy() == model.full_energy_recount());
  for (int i = 0; i < 100000; i++) model.kmc_step(rng);
  CHECK(model.energy() == model.full_energy_recount());
  for (size_t s = 0; s < model.n(); s++) {
    CHECK(model.stored_rate(s) ==
          doctest::Approx(model.fresh_rate(s)).epsilon(1e-9));
  }
  CHECK(model.events() == 100000);
  CHECK(model.clock() > 0.0);
}

TEST_CASE("vanished total rate reports completion without advancing") {
  // At beta this large every uphill Glauber rate underflows to zero.
  KmcModel model(4, 0.0, 1e6, 1);
  CHECK(model.total_rate() == 0.0);
  auto rng = make_rng(45);
  KmcModel::StepResult res = model.kmc_step(rng);
  CHECK(res.completed);
  CHECK(res.dt == 0.0);
  CHECK(model.clock() == 0.0);
  CHECK(model.events() == 0);
}

TEST_CASE("model construction rejects bad arguments") {
  CHECK_THROWS_AS(KmcModel(2, 0.1, 1.0, 1), std::invalid_argument);
  CHECK_THROWS_AS(KmcModel(4, -0.1, 1.0, 1), std::invalid_argument);
  CHECK_THROWS_AS(KmcModel(4, 1.1, 1.0, 1), std::invalid_argument);
  CHECK_THROWS_AS(KmcModel(4, 0.1, -1.0, 1), std::invalid_argument);
  CHECK_THROWS_AS(KmcModel(4, std::vector<uint8_t>(9, 0), 1.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(stationary_check(4, 0.1, 1.0, 100, 1), std::invalid_argument);
}

TEST_CASE("occupation statistics match the Boltzmann weights") {
  StationaryCheckResult res = stationary_check(3, 0.3, 1.0, 10000000, 5);
  REQUIRE(res.exact.size() == 512);
  REQUIRE(res.empirical.size() == 512);
  double se = 0.0, sm = 0.0;
  for (double w : res.exact) se += w;
  for (double w : res.empirical) sm += w;
  CHECK(se == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(sm == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(res.tv_distance < 0.01);
}

TEST_CASE("quench traces are deterministic and well formed") {
  QuenchTrace a = run_quench(16, 0.2, 2.0, 50.0, 7);
  QuenchTrace b = run_quench(16, 0.2, 2.0, 50.0, 7);
  CHECK(a.times == b.times);
  CHECK(a.epsilon == b.epsilon);
  CHECK(a.events == b.events);
  REQUIRE(a.times.size() >= 2);
  for (size_t i = 1; i < a.times.size(); i++) {
    CHECK(a.times[i] > a.times[i - 1]);
  }
  for (double e : a.epsilon) {
    CHECK(e >= 0.0);
    CHECK(e <= 2.0);
  }
  CHECK(a.L == 16);
  CHECK(a.p == 2.0 / 10.0);
  CHECK(a.beta == 2.0);
  CHECK(a.seed == 7);

  QuenchTrace c = run_quench(16, 0.2, 2.0, 50.0, 8);
  CHECK(a.epsilon != c.epsilon);
}

TEST_CASE("ensemble members reproduce standalone runs") {
  std::vector<QuenchTrace> ens = run_quench_ensemble(12, 0.1, 1.5, 20.0, 99, 3);
  REQUIRE(ens.size() == 3);
  for (size_t i = 0; i < 3; i++) {
    QuenchTrace solo = run_quench(12, 0.1, 1.5, 20.0, member_seed(99, i));
    CHECK(ens[i].times == solo.times);
    CHECK(ens[i].epsilon == solo.epsilon);
  }
}

TEST_CASE("field-dominated disorder relaxes fast, plaquettes arrest") {
  QuenchTrace fields = run_quench(32, 0.9, 4.0, 100.0, 3);
  QuenchTrace plaq = run_quench(32, 0.0, 4.0, 100.0, 3);
  CHECK(fields.epsilon.back() < 0.05);
  CHECK(plaq.epsilon.back() > 0.2);
}

TEST_CASE("event budget marks truncation") {
  QuenchOptions opts;
  opts.max_events = 50;
  QuenchTrace t = run_quench(16, 0.0, 1.0, 1000.0, 11, opts);
  CHECK(t.truncated);
  CHECK(t.events == 50);
}

TEST_CASE("identical traces collapse to score zero") {
  QuenchTrace t = run_quench(12, 0.0, 2.0, 50.0, 13);
  CollapseCurves c = collapse_transform({t, t}, {0.5, 0.5});
  CHECK(c.score == doctest::Approx(0.0).epsilon(1e-12));
  REQUIRE(c.curves.size() == 2);
  CHECK(c.curves[0] == c.curves[1]);
  CHECK(c.abscissa.size() == c.curves[0].size());
}

TEST_CASE("matched exponents beat raw and swapped time axes") {
  QuenchOptions opts;
  opts.t_min = 1.0;
  QuenchTrace t4 = run_quench(64, 0.0, 4.0, 10000.0, 1, opts);
  QuenchTrace t6 = run_quench(64, 0.0, 6.0, 10000.0, 2, opts);
  std::vector<QuenchTrace> traces = {t4, t6};
  double matched = collapse_transform(traces).score;
  double raw = collapse_transform(traces, {1.0, 1.0}).score;
  double swapped = collapse_transform(traces, {1.0 / 6.0, 1.0 / 4.0}).score;
  CHECK(matched < raw);
  CHECK(matched < swapped);
}

TEST_CASE("collapse input validation") {
  QuenchTrace t = synthetic_trace({1.0, 10.0, 100.0}, {0.5, 0.4, 0.3});
  CHECK_THROWS_AS(collapse_transform({t}, std::vector<double>{1.0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(collapse_transform({t, t}, std::vector<double>{1.0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(collapse_transform({t, t}, {1.0, 0.0}), std::invalid_argument);
  QuenchTrace other = synthetic_trace({1.0, 10.0}, {0.5, 0.4}, 9);
  CHECK_THROWS_AS(collapse_transform({t, other}, {1.0, 1.0}),
                  std::invalid_argument);
  QuenchTrace stub = synthetic_trace({1.0}, {0.5});
  CHECK_THROWS_AS(collapse_transform({t, stub}, {1.0, 1.0}),
                  std::invalid_argument);
  QuenchTrace late = synthetic_trace({1000.0, 10000.0}, {0.2, 0.1});
  CHECK_THROWS_AS(collapse_transform({t, late}, {1.0, 1.0}),
                  std::runtime_error);
  QuenchTrace no_beta = synthetic_trace({1.0, 10.0}, {0.5, 0.4}, 8, 0.0, 0.0);
  CHECK_THROWS_AS(collapse_transform({t, no_beta}), std::invalid_argument);
}

TEST_CASE("plateau detector finds two separated levels") {
  std::vector<double> times = log_grid(1.0, 1e6, 240);
  std::vector<double> eps(times.size());
  for (size_t i = 0; i < times.size(); i++) {
    double lt = std::log10(times[i]);
    if (lt <= 2.0) eps[i] = 0.5;
    else if (lt >= 4.0) eps[i] = 0.3;
    else eps[i] = 0.5 - 0.1 * (lt - 2.0);
  }
  std::vector<Plateau> found = find_plateaus(synthetic_trace(times, eps));
  REQUIRE(found.size() == 2);
  CHECK(found[0].eps_mean == doctest::Approx(0.5).epsilon(0.02));
  CHECK(found[1].eps_mean == doctest::Approx(0.3).epsilon(0.02));
  CHECK(found[0].t_end < found[1].t_start);
  CHECK(found[0].t_start <= 1.5);
  CHECK(found[1].t_end >= 5e5);
}

TEST_CASE("plateau detector needs a downward separation") {
  std::vector<double> times = log_grid(1.0, 1e6, 240);
  std::vector<double> rising(times.size());
  for (size_t i = 0; i < times.size(); i++) {
    double lt = std::log10(times[i]);
    if (lt <= 2.0) rising[i] = 0.3;
    else if (lt >= 4.0) rising[i] = 0.5;
    else rising[i] = 0.3 + 0.1 * (lt - 2.0);
  }
  std::vector<Plateau> up = find_plateaus(synthetic_trace(times, rising));
  CHECK(up.size() == 1);

  std::vector<double> flat(times.size(), 0.42);
  std::vector<Plateau> one = find_plateaus(synthetic_trace(times, flat));
  REQUIRE(one.size() == 1);
  CHECK(one[0].eps_mean == doctest::Approx(0.42).epsilon(1e-9));
}
