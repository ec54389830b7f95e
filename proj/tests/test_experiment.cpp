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

#include <filesystem>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "plaq/experiment.hpp"
#include "plaq/rng.hpp"

using namespace plaq;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const fs::path kOut = "/tmp/plaq_experiment_tests";

std::string first_line(const fs::path &p) {
  std::ifstream f(p);
  REQUIRE(f.good());
  std::string line;
  std::getline(f, line);
  return line;
}

json read_json(const fs::path &p) {
  std::ifstream f(p);
  REQUIRE(f.good());
  return json::parse(f);
}

ExperimentResult run_from_text(const std::string &text) {
  return run_experiment(parse_experiment_config(KeyValueConfig::parse_text(text)));
}

bool message_contains(const std::function<void()> &fn, const std::string &part) {
  try {
    fn();
  } catch (const std::exception &e) {
    return std::string(e.what()).find(part) != std::string::npos;
  }
  return false;
}

}  // namespace

TEST_CASE("key-value parsing, comments, and echo round trip") {
  KeyValueConfig kv = KeyValueConfig::parse_text(
      "# leading comment\n"
      "a = 1\n"
      "\n"
      "name = hello world\n"
      "trail = 5   # trailing comment\n");
  CHECK(kv.has("a"));
  CHECK(kv.get("a") == "1");
  CHECK(kv.get("name") == "hello world");
  CHECK(kv.get("trail") == "5");
  CHECK_FALSE(kv.has("missing"));
  CHECK_THROWS_AS(KeyValueConfig::parse_text("just words\n"), ConfigError);

  KeyValueConfig back = KeyValueConfig::parse_text(kv.echo());
  CHECK(back == kv);

  kv.set("a", "2");
  CHECK(kv.get("a") == "2");
  kv.set("fresh", "3");
  CHECK(kv.get("fresh") == "3");

  CHECK_THROWS_AS(KeyValueConfig::parse_text("x = 1\nx = 2\n"), ConfigError);
  CHECK(message_contains(
      [] { KeyValueConfig::parse_text("x = 1\nx = 2\n"); }, "duplicate key"));
  CHECK(message_contains([&kv] { kv.get("nope"); }, "missing key 'nope'"));
}

TEST_CASE("typed readers name the offending key") {
  KeyValueConfig kv = KeyValueConfig::parse_text(
      "n = 12\nx = 2.5\nbad = zebra\nfrac = 1.5\nlist = 0.5, 1.5, 2.5\n"
      "names = a,b , c\nempty =\n");
  CHECK(config_u64(kv, "n", 0) == 12);
  CHECK(config_u64(kv, "absent", 7) == 7);
  CHECK(config_size_required(kv, "n") == 12);
  CHECK(config_double_required(kv, "x") == 2.5);
  CHECK(config_double(kv, "absent", 1.25) == 1.25);
  CHECK_THROWS_AS(config_u64_required(kv, "bad"), ConfigError);
  CHECK_THROWS_AS(config_u64_required(kv, "frac"), ConfigError);
  CHECK_THROWS_AS(config_double_required(kv, "bad"), ConfigError);
  CHECK_THROWS_AS(config_u64_required(kv, "absent"), ConfigError);
  CHECK(message_contains([&kv] { config_double_required(kv, "bad"); },
                         "key 'bad'"));

  std::vector<double> vals = config_double_list(kv, "list");
  REQUIRE(vals.size() == 3);
  CHECK(vals[0] == 0.5);
  CHECK(vals[2] == 2.5);
  std::vector<std::string> names = config_string_list(kv, "names");
  REQUIRE(names.size() == 3);
  CHECK(names[1] == "b");
  CHECK_THROWS_AS(config_double_list(kv, "empty"), ConfigError);
}

TEST_CASE("experiment kind names round trip") {
  for (ExperimentKind k :
       {ExperimentKind::kCircuitTrajectory, ExperimentKind::kMiptSweep,
        ExperimentKind::kRenyiClassical, ExperimentKind::kKwCheck,
        ExperimentKind::kFiniteBetaSweep, ExperimentKind::kMcmcQuench,
        ExperimentKind::kCollapse, ExperimentKind::kSupportStats}) {
    CHECK(kind_from_name(kind_name(k)) == k);
  }
  CHECK_THROWS_AS(kind_from_name("quantum-gravity"), ConfigError);
}

TEST_CASE("experiment config validation is strict") {
  ExperimentConfig cfg = parse_experiment_config(KeyValueConfig::parse_text(
      "kind = kw-check\nout = /tmp/x\nL = 4\nT = 4\np = 0.2\nbeta = 1\n"));
  CHECK(cfg.kind == ExperimentKind::kKwCheck);
  CHECK(cfg.seed == 1);
  CHECK(cfg.ensemble == 1);
  CHECK(cfg.out_dir == "/tmp/x");

  CHECK_THROWS_AS(parse_experiment_config(KeyValueConfig::parse_text(
                      "kind = kw-check\nout = /tmp/x\nL = 4\nT = 4\np = 0.2\n"
                      "beta = 1\nwidget = 9\n")),
                  ConfigError);
  CHECK(message_contains(
      [] {
        parse_experiment_config(KeyValueConfig::parse_text(
            "kind = kw-check\nout = /tmp/x\nwidget = 9\n"));
      },
      "unknown key 'widget'"));
  CHECK_THROWS_AS(parse_experiment_config(KeyValueConfig::parse_text(
                      "kind = kw-check\nout = /tmp/x\nensemble = 0\n")),
                  ConfigError);
  CHECK_THROWS_AS(parse_experiment_config(KeyValueConfig::parse_text(
                      "kind = time-travel\nout = /tmp/x\n")),
                  ConfigError);
  CHECK_THROWS_AS(
      parse_experiment_config(KeyValueConfig::parse_text("out = /tmp/x\n")),
      ConfigError);

  CHECK_THROWS_AS(parse_sweep_config(KeyValueConfig::parse_text(
                      "kind = kw-check\nout = /tmp/x\nsweep_key = beta\n")),
                  ConfigError);
  ExperimentConfig sweep = parse_sweep_config(KeyValueConfig::parse_text(
      "kind = kw-check\nout = /tmp/x\nL = 4\nT = 4\np = 0.2\n"
      "sweep_key = beta\nsweep_values = 0.5, 1.0\n"));
  CHECK(sweep.kind == ExperimentKind::kKwCheck);
}

TEST_CASE("init, perturbation, and path specs") {
  CHECK(parse_init_spec("x").kind == InitialStateKind::kUniformX);
  CHECK(parse_init_spec("z").kind == InitialStateKind::kUniformZ);
  CHECK(parse_init_spec("staggered").kind == InitialStateKind::kStaggered);
  InitSpec r = parse_init_spec("random:0.25");
  CHECK(r.kind == InitialStateKind::kRandomPX);
  CHECK(r.p_x == 0.25);
  CHECK_THROWS_AS(parse_init_spec("random:1.5"), ConfigError);
  CHECK_THROWS_AS(parse_init_spec("random:abc"), ConfigError);
  CHECK_THROWS_AS(parse_init_spec("y"), ConfigError);

  CHECK(parse_perturb_spec("none", 0.0).kind == PerturbationConfig::kNone);
  PerturbationConfig fc = parse_perturb_spec("flipped-cnot", 0.3);
  CHECK(fc.kind == PerturbationConfig::kFlippedCnot);
  CHECK(fc.rate == 0.3);
  CHECK(parse_perturb_spec("cz", 1.0).kind ==
        PerturbationConfig::kCzSubstitution);
  CHECK_THROWS_AS(parse_perturb_spec("cz", 1.5), ConfigError);
  CHECK_THROWS_AS(parse_perturb_spec("wobble", 0.1), ConfigError);

  CHECK(parse_path_spec("auto") == SimPath::kAuto);
  CHECK(parse_path_spec("reference") == SimPath::kReference);
  CHECK(parse_path_spec("split") == SimPath::kSplit);
  CHECK_THROWS_AS(parse_path_spec("warp"), ConfigError);
}

TEST_CASE("line fits recover exact coefficients inside the window") {
  std::vector<double> x = {0, 1, 2, 3, 4, 5, 50};
  std::vector<double> y = {1, 3, 5, 7, 9, 11, -999};
  LineFit f = fit_linear(x, y, 0.0, 5.0);
  CHECK(f.slope == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(f.intercept == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(fit_linear(x, y, 100.0, 200.0), std::invalid_argument);

  std::vector<double> t, s;
  for (double lt = 2.0; lt <= 4.01; lt += 0.25) {
    t.push_back(std::pow(10.0, lt));
    s.push_back(3.7 * lt + 0.5);
  }
  LineFit g = fit_log10(t, s, 1e2, 1e4);
  CHECK(g.slope == doctest::Approx(3.7).epsilon(1e-12));
  CHECK(g.intercept == doctest::Approx(0.5).epsilon(1e-10));
}

TEST_CASE("member seeds are deterministic and distinct") {
  std::set<uint64_t> seen;
  for (uint64_t i = 0; i < 200; i++) {
    uint64_t s = member_seed(77, i);
    CHECK(s == member_seed(77, i));
    seen.insert(s);
  }
  CHECK(seen.size() == 200);
  CHECK(member_seed(77, 0) != member_seed(78, 0));
}

TEST_CASE("quench trace csv round trip is exact") {
  QuenchTrace t = run_quench(12, 0.3, 1.7, 25.0, 9);
  std::ostringstream os;
  write_quench_csv(os, t);
  std::istringstream is(os.str());
  QuenchTrace back = read_quench_csv(is);
  CHECK(back.L == t.L);
  CHECK(back.p == t.p);
  CHECK(back.beta == t.beta);
  CHECK(back.seed == t.seed);
  CHECK(back.events == t.events);
  CHECK(back.completed == t.completed);
  CHECK(back.truncated == t.truncated);
  CHECK(back.times == t.times);
  CHECK(back.epsilon == t.epsilon);

  std::istringstream bad("wrong,header\n1,2\n");
  CHECK_THROWS(read_quench_csv(bad));
}

TEST_CASE("manifest writing verifies its referenced files") {
  fs::path dir = kOut / "manifest";
  fs::remove_all(dir);
  fs::create_directories(dir);
  write_manifest(dir.string(), {});
  CHECK(read_json(dir / "manifest.json")["plots"].is_array());

  PlotSpec plot;
  plot.data_file = "ghost.csv";
  plot.x = "t";
  plot.y = "v";
  CHECK_THROWS_AS(write_manifest(dir.string(), {plot}), InvariantError);
}

TEST_CASE("worker configuration is sane") {
  apply_worker_env();
  CHECK(configured_workers() >= 1);
}

TEST_CASE("circuit trajectory artifacts") {
  fs::path dir = kOut / "traj";
  fs::remove_all(dir);
  ExperimentResult res = run_from_text(
      "kind = circuit-trajectory\nout = " + dir.string() +
      "\nL = 6\nt_max = 8\np = 0.2\ninit = x\nensemble = 3\nseed = 5\n");
  for (int i = 0; i < 3; i++) {
    CHECK(first_line(dir / ("trajectory_" + std::to_string(i) + ".csv")) ==
          "t,S_half,S_quarter,N_X,N_Z,PE_Z,PE_X");
  }
  CHECK(first_line(dir / "trajectory_mean.csv") ==
        "t,S_half_mean,S_half_stderr,S_quarter_mean,S_quarter_stderr");
  json summary = read_json(dir / "result.json");
  CHECK(summary["kind"] == "circuit-trajectory");
  CHECK(summary["ensemble"] == 3);
  KeyValueConfig echoed = KeyValueConfig::parse_file((dir / "config.txt").string());
  CHECK(echoed.get("L") == "6");
  json manifest = read_json(dir / "manifest.json");
  REQUIRE(manifest["plots"].size() == 1);
  CHECK(manifest["plots"][0]["data"] == "trajectory_mean.csv");
}

TEST_CASE("measurement-rate sweep artifacts") {
  fs::path dir = kOut / "mipt";
  fs::remove_all(dir);
  run_from_text("kind = mipt-sweep\nout = " + dir.string() +
                "\nL = 6\nt_max = 6\np_grid = 0.1, 0.4\nensemble = 2\n");
  std::ifstream f(dir / "mipt.csv");
  std::string line;
  std::getline(f, line);
  CHECK(line == "p,s_half_mean,s_half_stderr,n");
  int rows = 0;
  while (std::getline(f, line)) {
    if (!line.empty()) rows++;
  }
  CHECK(rows == 2);
}

TEST_CASE("classical entropy artifacts agree across methods") {
  fs::path dir = kOut / "renyi";
  fs::remove_all(dir);
  run_from_text("kind = renyi-classical\nout = " + dir.string() +
                "\nL = 4\nT = 5\np = 0.3\npin = row1\nensemble = 3\nseed = 2\n");
  CHECK(first_line(dir / "renyi.csv") ==
        "member,seed,k2,k4,s2_replicas,s2_groups,methods_agree");
  json summary = read_json(dir / "result.json");
  CHECK(summary["methods_agree"] == true);
  CHECK(summary["S2"].is_number_integer());
}

TEST_CASE("duality check artifacts") {
  fs::path dir = kOut / "kw";
  fs::remove_all(dir);
  run_from_text("kind = kw-check\nout = " + dir.string() +
                "\nL = 4\nT = 5\np = 0.3\nbeta = 1.0\nensemble = 2\n");
  CHECK(first_line(dir / "kw.csv") ==
        "member,seed,Q,logZ_brute,logZ_dual,residual");
  json summary = read_json(dir / "result.json");
  CHECK(summary["max_residual"].get<double>() < 1e-10);
}

TEST_CASE("finite-temperature sweep artifacts") {
  fs::path dir = kOut / "fb";
  fs::remove_all(dir);
  run_from_text("kind = finite-beta-sweep\nout = " + dir.string() +
                "\nL = 4\nT = 5\np = 0.2\nbeta_grid = 0.5, 2.0\nensemble = 2\n");
  CHECK(first_line(dir / "finite_beta.csv") == "beta,s2_nats_mean,s2_nats_stderr,n");
  json summary = read_json(dir / "result.json");
  REQUIRE(summary["betas"].size() == 2);
  CHECK(summary["s2_nats_mean"][1].get<double>() >=
        summary["s2_nats_mean"][0].get<double>() - 1e-9);
}

TEST_CASE("quench and collapse artifacts") {
  fs::path dir4 = kOut / "mcmc4";
  fs::path dir6 = kOut / "mcmc6";
  fs::path dirc = kOut / "collapse";
  fs::remove_all(dir4);
  fs::remove_all(dir6);
  fs::remove_all(dirc);
  run_from_text("kind = mcmc-quench\nout = " + dir4.string() +
                "\nL = 16\np = 0\nbeta = 4\nt_max = 100\nt_min = 1\n"
                "samples = 40\nseed = 1\n");
  run_from_text("kind = mcmc-quench\nout = " + dir6.string() +
                "\nL = 16\np = 0\nbeta = 6\nt_max = 100\nt_min = 1\n"
                "samples = 40\nseed = 2\n");
  std::string head = first_line(dir4 / "quench_0.csv");
  CHECK(head.rfind("# L=16 p=0 beta=4 seed=", 0) == 0);
  CHECK(first_line(dir4 / "quench_mean.csv") == "t,epsilon_mean,epsilon_stderr");

  run_from_text("kind = collapse\nout = " + dirc.string() + "\nfiles = " +
                (dir4 / "quench_0.csv").string() + ", " +
                (dir6 / "quench_0.csv").string() + "\n");
  CHECK(first_line(dirc / "collapse.csv") == "u,curve0,curve1");
  json summary = read_json(dirc / "result.json");
  CHECK(summary["score"].is_number());
  CHECK(summary["score_raw"].is_number());
  CHECK(summary.contains("improvement_ratio"));
}

TEST_CASE("boundary support artifacts") {
  fs::path dir = kOut / "support";
  fs::remove_all(dir);
  run_from_text("kind = support-stats\nout = " + dir.string() +
                "\nL = 8\nT = 8\np = 0.1\nensemble = 2\n");
  CHECK(first_line(dir / "support.csv") == "member,seed,dim,extensive_fraction");
  CHECK(first_line(dir / "histogram.csv") == "support,count");
  json summary = read_json(dir / "result.json");
  CHECK(summary["extensive_fraction_mean"].is_number());
}

TEST_CASE("parameter sweep artifacts") {
  fs::path dir = kOut / "sweep";
  fs::remove_all(dir);
  ExperimentConfig cfg = parse_sweep_config(KeyValueConfig::parse_text(
      "kind = kw-check\nout = " + dir.string() +
      "\nL = 4\nT = 4\np = 0.2\nensemble = 2\n"
      "sweep_key = beta\nsweep_values = 0.5, 1.0\n"));
  run_sweep(cfg);
  std::ifstream f(dir / "sweep.csv");
  std::string line;
  std::getline(f, line);
  CHECK(line == "param,value,mean,stderr,n");
  int rows = 0;
  while (std::getline(f, line)) {
    if (line.empty()) continue;
    rows++;
    CHECK(line.rfind("beta,", 0) == 0);
    size_t c1 = line.find(',');
    size_t c2 = line.find(',', c1 + 1);
    size_t c3 = line.find(',', c2 + 1);
    double mean = std::stod(line.substr(c2 + 1, c3 - c2 - 1));
    CHECK(mean < 1e-9);
  }
  CHECK(rows == 2);
  json summary = read_json(dir / "result.json");
  CHECK(summary["observable"] == "residual");
}
