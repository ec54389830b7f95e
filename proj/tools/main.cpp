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

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "plaq/circuit.hpp"
#include "plaq/experiment.hpp"
#include "plaq/kmc.hpp"
#include "plaq/kw.hpp"
#include "plaq/replica.hpp"
#include "plaq/rng.hpp"

using nlohmann::json;

namespace {

// Disorder-grid source shared by the classical-model subcommands.
struct SourceOpts {
  std::string grid_file;
  size_t L = 0, T = 0;
  double p = 0.0;
  uint64_t seed = 1;
  std::string pin = "row1";
};

void add_source_opts(CLI::App *cmd, SourceOpts &o) {
  auto *gf = cmd->add_option("--grid-file", o.grid_file,
                             "read the disorder grid from a file");
  auto *l = cmd->add_option("--L", o.L, "number of cells per row");
  auto *t = cmd->add_option("--T", o.T, "number of grid rows");
  cmd->add_option("--p", o.p, "marker density on circuit rows");
  cmd->add_option("--seed", o.seed, "disorder seed");
  cmd->add_option("--pin", o.pin, "initial pinning: row1, rows12, or none")
      ->check(CLI::IsMember({"row1", "rows12", "none"}));
  l->excludes(gf);
  t->excludes(gf);
}

plaq::DisorderGrid grid_from(const SourceOpts &o) {
  if (!o.grid_file.empty()) {
    std::ifstream f(o.grid_file);
    if (!f) throw plaq::ConfigError("cannot open grid file '" + o.grid_file + "'");
    return plaq::DisorderGrid::read(f);
  }
  if (o.L == 0 || o.T == 0) {
    throw plaq::ConfigError("need --grid-file or --L, --T, and --p");
  }
  return plaq::DisorderGrid::random_interior(o.L, o.T, o.p, o.seed);
}

plaq::ParityCheckSystem system_from(const SourceOpts &o) {
  plaq::DisorderGrid grid = grid_from(o);
  plaq::InitialCondition init = plaq::InitialCondition::fix_row1(grid.L);
  if (o.pin == "rows12") init = plaq::InitialCondition::fix_rows12(grid.L);
  if (o.pin == "none") init = plaq::InitialCondition::free_rows(grid.L);
  return plaq::build_parity_checks(grid, init);
}

void emit(std::ostream &os, const json &j) { os << j.dump(2) << "\n"; }

std::ofstream open_out(const std::string &path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw plaq::ConfigError("cannot open output file '" + path + "'");
  return f;
}

int run_circuit_cmd(size_t L, size_t t_max, double p, const std::string &init,
                    const std::string &perturb, double perturb_rate,
                    const std::string &path, uint64_t seed,
                    const std::string &out, const std::string &export_grid) {
  plaq::CircuitConfig cc;
  cc.L = L;
  cc.t_max = t_max;
  cc.p = p;
  plaq::InitSpec spec = plaq::parse_init_spec(init);
  cc.init = spec.kind;
  cc.p_x = spec.p_x;
  cc.perturb = plaq::parse_perturb_spec(perturb, perturb_rate);
  cc.path = plaq::parse_path_spec(path);
  cc.seed = seed;
  plaq::CircuitRunResult res = plaq::run_circuit(cc);

  std::ostringstream csv;
  csv << "t,S_half,S_quarter,N_X,N_Z,PE_Z,PE_X\n";
  for (size_t i = 0; i < res.record.steps(); i++) {
    csv << (i + 1) << ',' << res.record.s_half[i] << ','
        << res.record.s_quarter[i] << ',' << res.record.n_x[i] << ','
        << res.record.n_z[i] << ',' << res.record.pe_z[i] << ','
        << res.record.pe_x[i] << '\n';
  }
  if (out.empty()) {
    std::cout << csv.str();
  } else {
    open_out(out) << csv.str();
  }
  if (!export_grid.empty()) {
    std::ofstream f = open_out(export_grid);
    plaq::export_disorder(res.mask).write(f);
  }
  return 0;
}

int run_renyi_cmd(const SourceOpts &src, size_t x0, size_t x1,
                  const std::string &method) {
  plaq::ParityCheckSystem sys = system_from(src);
  if (x1 == SIZE_MAX) x1 = sys.L / 2;
  json j;
  j["L"] = sys.L;
  j["T"] = sys.T;
  j["x0"] = x0;
  j["x1"] = x1;
  if (method != "groups") {
    plaq::Renyi2Replicas r = plaq::renyi2_via_replicas(sys, x0, x1);
    j["k2"] = r.k2;
    j["k4"] = r.k4;
    j["S2"] = r.s2_bits;
  }
  if (method != "replica") {
    int64_t g = plaq::renyi2_via_groups(sys, x0, x1);
    j["S2_groups"] = g;
    if (method == "both") {
      j["methods_agree"] = j["S2"].get<int64_t>() == g;
    } else {
      j["S2"] = g;
    }
  }
  emit(std::cout, j);
  return 0;
}

int run_kw_cmd(const SourceOpts &src, double beta, size_t n_max, size_t q_max) {
  plaq::ParityCheckSystem sys = system_from(src);
  plaq::KwIdentityResult r = plaq::kw_identity_check(sys, beta, n_max, q_max);
  json j;
  j["beta"] = beta;
  j["N"] = sys.n();
  j["M"] = sys.m();
  j["Q"] = r.q;
  j["logZ_brute"] = r.log_z_brute;
  j["logZ_dual"] = r.log_z_dual;
  j["residual"] = r.residual;
  emit(std::cout, j);
  return 0;
}

int run_finite_beta_cmd(const SourceOpts &src, size_t x0, size_t x1,
                        double beta, size_t n_max, size_t q_max) {
  plaq::ParityCheckSystem sys = system_from(src);
  if (x1 == SIZE_MAX) x1 = sys.L / 2;
  plaq::FiniteBetaOptions opts;
  opts.n_max = n_max;
  opts.q_max = q_max;
  double s2 = plaq::finite_beta_renyi2(sys, x0, x1, beta, opts);
  json j;
  j["beta"] = beta;
  j["x0"] = x0;
  j["x1"] = x1;
  j["S2_nats"] = s2;
  j["S2_bits"] = s2 / std::log(2.0);
  emit(std::cout, j);
  return 0;
}

int run_mcmc_cmd(size_t L, double p, double beta, double t_max, double t_min,
                 uint64_t seed, size_t samples, uint64_t max_events,
                 const std::string &out) {
  plaq::QuenchOptions opts;
  opts.samples = samples;
  opts.t_min = t_min;
  opts.max_events = max_events;
  plaq::QuenchTrace trace = plaq::run_quench(L, p, beta, t_max, seed, opts);
  if (out.empty()) {
    plaq::write_quench_csv(std::cout, trace);
  } else {
    std::ofstream f = open_out(out);
    plaq::write_quench_csv(f, trace);
  }
  return 0;
}

int run_collapse_cmd(const std::vector<std::string> &files,
                     std::vector<double> exponents, size_t grid_points) {
  std::vector<plaq::QuenchTrace> traces;
  for (const std::string &f : files) {
    std::ifstream is(f);
    if (!is) throw plaq::ConfigError("cannot open trace file '" + f + "'");
    traces.push_back(plaq::read_quench_csv(is));
  }
  if (exponents.empty()) {
    for (const plaq::QuenchTrace &t : traces) {
      if (!(t.beta > 0.0)) {
        throw plaq::ConfigError("trace metadata lacks beta; pass --exponents");
      }
      exponents.push_back(1.0 / t.beta);
    }
  }
  if (exponents.size() != traces.size()) {
    throw plaq::ConfigError("--exponents needs one value per file");
  }
  plaq::CollapseCurves c = plaq::collapse_transform(traces, exponents, grid_points);
  plaq::CollapseCurves raw = plaq::collapse_transform(
      traces, std::vector<double>(traces.size(), 1.0), grid_points);
  json j;
  j["score"] = c.score;
  j["score_raw"] = raw.score;
  j["improvement_ratio"] = c.score > 0.0
                               ? raw.score / c.score
                               : std::numeric_limits<double>::infinity();
  emit(std::cout, j);
  return 0;
}

int run_support_cmd(const SourceOpts &src) {
  plaq::ParityCheckSystem sys = system_from(src);
  plaq::SymmetryBasis basis = plaq::symmetry_basis(sys);
  plaq::BoundaryGroupReport rep = plaq::boundary_quotient_generators(sys, basis);
  plaq::SupportStatistics st = plaq::support_statistics(rep, sys.L);
  json j;
  j["L"] = sys.L;
  j["T"] = sys.T;
  j["dim"] = st.dim;
  j["extensive_fraction"] = st.extensive_fraction;
  j["histogram"] = st.histogram;
  emit(std::cout, j);
  return 0;
}

plaq::KeyValueConfig load_config(const std::string &path,
                                 const std::vector<std::string> &overrides) {
  plaq::KeyValueConfig kv = plaq::KeyValueConfig::parse_file(path);
  for (const std::string &ov : overrides) {
    size_t eq = ov.find('=');
    if (eq == std::string::npos) {
      throw plaq::ConfigError("--set expects key=value, got '" + ov + "'");
    }
    kv.set(ov.substr(0, eq), ov.substr(eq + 1));
  }
  return kv;
}

}  // namespace

int main(int argc, char **argv) {
  plaq::apply_worker_env();
  CLI::App app{"measurement-circuit and plaquette-model toolkit"};
  app.require_subcommand(1);

  // circuit
  auto *circuit = app.add_subcommand("circuit", "run one circuit trajectory");
  size_t c_L = 0, c_tmax = 0;
  double c_p = 0.0, c_rate = 0.0;
  std::string c_init = "x", c_perturb = "none", c_path = "auto", c_out,
              c_export;
  uint64_t c_seed = 1;
  circuit->add_option("--L", c_L, "number of cells")->required();
  circuit->add_option("--t-max", c_tmax, "number of steps")->required();
  circuit->add_option("--p", c_p, "measurement probability per cell")
      ->required();
  circuit->add_option("--init", c_init, "x, z, staggered, or random:<pX>");
  circuit->add_option("--perturb", c_perturb, "none, flipped-cnot, or cz");
  circuit->add_option("--perturb-rate", c_rate, "perturbation probability");
  circuit->add_option("--path", c_path, "auto, reference, or split");
  circuit->add_option("--seed", c_seed, "trajectory seed");
  circuit->add_option("--out", c_out, "CSV output file (default stdout)");
  circuit->add_option("--export-grid", c_export,
                      "write the realized disorder grid to a file");

  // renyi
  auto *renyi = app.add_subcommand(
      "renyi", "zero-temperature Renyi-2 entropy of a boundary region");
  SourceOpts r_src;
  size_t r_x0 = 0, r_x1 = SIZE_MAX;
  std::string r_method = "both";
  add_source_opts(renyi, r_src);
  renyi->add_option("--x0", r_x0, "region start cell");
  renyi->add_option("--x1", r_x1, "region end cell (default L/2)");
  renyi->add_option("--method", r_method, "replica, groups, or both")
      ->check(CLI::IsMember({"replica", "groups", "both"}));

  // kw-check
  auto *kw = app.add_subcommand(
      "kw-check", "duality identity residual for the partition function");
  SourceOpts k_src;
  double k_beta = 1.0;
  size_t k_nmax = plaq::kDefaultNMax, k_qmax = plaq::kDefaultQMax;
  add_source_opts(kw, k_src);
  kw->add_option("--beta", k_beta, "inverse temperature")->required();
  kw->add_option("--n-max", k_nmax, "brute-force spin-count cap");
  kw->add_option("--q-max", k_qmax, "dual redundancy-count cap");

  // renyi-finite-beta
  auto *fb = app.add_subcommand("renyi-finite-beta",
                                "replica Renyi-2 at finite inverse temperature");
  SourceOpts f_src;
  size_t f_x0 = 0, f_x1 = SIZE_MAX;
  double f_beta = 1.0;
  size_t f_nmax = plaq::kDefaultNMax, f_qmax = plaq::kDefaultQMax;
  add_source_opts(fb, f_src);
  fb->add_option("--x0", f_x0, "region start cell");
  fb->add_option("--x1", f_x1, "region end cell (default L/2)");
  fb->add_option("--beta", f_beta, "inverse temperature")->required();
  fb->add_option("--n-max", f_nmax, "brute-force spin-count cap");
  fb->add_option("--q-max", f_qmax, "dual redundancy-count cap");

  // mcmc
  auto *mcmc = app.add_subcommand("mcmc", "rejection-free quench trace");
  size_t m_L = 0, m_samples = 50;
  double m_p = 0.0, m_beta = 1.0, m_tmax = 1e3, m_tmin = 1e-2;
  uint64_t m_seed = 1, m_maxev = UINT64_MAX;
  mcmc->add_option("--L", m_L, "lattice side")->required();
  mcmc->add_option("--p", m_p, "one-body marker density")->required();
  mcmc->add_option("--beta", m_beta, "inverse temperature")->required();
  mcmc->add_option("--t-max", m_tmax, "final clock time")->required();
  mcmc->add_option("--t-min", m_tmin, "first sampling time");
  mcmc->add_option("--seed", m_seed, "quench seed");
  mcmc->add_option("--samples", m_samples, "sampling-grid size cap");
  mcmc->add_option("--max-events", m_maxev, "event-count cap");
  std::string m_out;
  mcmc->add_option("--out", m_out, "CSV output file (default stdout)");

  // collapse
  auto *collapse = app.add_subcommand(
      "collapse", "rescaled-time collapse score for quench traces");
  std::vector<std::string> cl_files;
  std::vector<double> cl_expo;
  size_t cl_grid = 200;
  collapse->add_option("--files", cl_files, "quench trace CSVs")
      ->required()
      ->expected(-2);
  collapse->add_option("--exponents", cl_expo,
                       "rescaling exponents (default 1/beta from metadata)");
  collapse->add_option("--grid-points", cl_grid, "overlap-grid resolution");

  // support-stats
  auto *support = app.add_subcommand(
      "support-stats", "boundary-generator support statistics");
  SourceOpts s_src;
  add_source_opts(support, s_src);

  // experiment / sweep
  auto *experiment =
      app.add_subcommand("experiment", "run a configured experiment");
  std::string e_config;
  std::vector<std::string> e_sets;
  experiment->add_option("--config", e_config, "flat key=value config file")
      ->required();
  experiment->add_option("--set", e_sets, "override key=value");

  auto *sweep = app.add_subcommand("sweep", "run a configured parameter sweep");
  std::string w_config;
  std::vector<std::string> w_sets;
  sweep->add_option("--config", w_config, "flat key=value config file")
      ->required();
  sweep->add_option("--set", w_sets, "override key=value");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    app.exit(e);
    return 2;
  }

  try {
    if (circuit->parsed()) {
      return run_circuit_cmd(c_L, c_tmax, c_p, c_init, c_perturb, c_rate,
                             c_path, c_seed, c_out, c_export);
    }
    if (renyi->parsed()) return run_renyi_cmd(r_src, r_x0, r_x1, r_method);
    if (kw->parsed()) return run_kw_cmd(k_src, k_beta, k_nmax, k_qmax);
    if (fb->parsed()) {
      return run_finite_beta_cmd(f_src, f_x0, f_x1, f_beta, f_nmax, f_qmax);
    }
    if (mcmc->parsed()) {
      return run_mcmc_cmd(m_L, m_p, m_beta, m_tmax, m_tmin, m_seed, m_samples,
                          m_maxev, m_out);
    }
    if (collapse->parsed()) return run_collapse_cmd(cl_files, cl_expo, cl_grid);
    if (support->parsed()) return run_support_cmd(s_src);
    if (experiment->parsed()) {
      plaq::ExperimentConfig cfg =
          plaq::parse_experiment_config(load_config(e_config, e_sets));
      plaq::ExperimentResult res = plaq::run_experiment(cfg);
      std::cout << res.summary_json;
      return 0;
    }
    if (sweep->parsed()) {
      plaq::ExperimentConfig cfg =
          plaq::parse_sweep_config(load_config(w_config, w_sets));
      plaq::ExperimentResult res = plaq::run_sweep(cfg);
      std::cout << res.summary_json;
      return 0;
    }
  } catch (const plaq::ConfigError &e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const plaq::CapacityError &e) {
    std::cerr << "capacity error: " << e.what() << "\n";
    return 3;
  } catch (const plaq::InvariantError &e) {
    std::cerr << "invariant violation: " << e.what() << "\n";
    return 4;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
