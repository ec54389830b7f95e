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
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "json.hpp"
#include "plaq/experiment.hpp"
#include "plaq/kw.hpp"
#include "plaq/rng.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace plaq {
namespace {

struct ArtifactDir {
  fs::path root;
  std::vector<std::string> files;

  explicit ArtifactDir(const std::string &dir) : root(dir) {
    if (dir.empty()) throw ConfigError("key 'out': output directory required");
    fs::create_directories(root);
  }
  void write(const std::string &name, const std::string &content) {
    std::ofstream f(root / name, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + (root / name).string());
    f << content;
    files.push_back(name);
  }
  bool exists(const std::string &name) const { return fs::exists(root / name); }
};

struct MeanErr {
  double mean = 0.0, stderr_ = 0.0;
  size_t n = 0;
};

MeanErr mean_stderr(const std::vector<double> &v) {
  MeanErr out;
  out.n = v.size();
  if (v.empty()) return out;
  for (double x : v) out.mean += x;
  out.mean /= double(v.size());
  if (v.size() > 1) {
    double ss = 0.0;
    for (double x : v) ss += (x - out.mean) * (x - out.mean);
    out.stderr_ = std::sqrt(ss / double(v.size() - 1) / double(v.size()));
  }
  return out;
}

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(12) << v;
  return os.str();
}

double steady_window_mean(const std::vector<int64_t> &v) {
  if (v.empty()) return 0.0;
  size_t start = v.size() - v.size() / 4;
  if (start >= v.size()) start = 0;
  double acc = 0.0;
  for (size_t i = start; i < v.size(); i++) acc += double(v[i]);
  return acc / double(v.size() - start);
}

CircuitConfig circuit_config_from(const KeyValueConfig &kv, uint64_t seed) {
  CircuitConfig cc;
  cc.L = config_size_required(kv, "L");
  cc.t_max = config_size_required(kv, "t_max");
  cc.p = config_double_required(kv, "p");
  InitSpec init = parse_init_spec(kv.has("init") ? kv.get("init") : "x");
  cc.init = init.kind;
  cc.p_x = init.p_x;
  cc.perturb = parse_perturb_spec(kv.has("perturb") ? kv.get("perturb") : "none",
                                  config_double(kv, "perturb_rate", 0.0));
  cc.path = parse_path_spec(kv.has("path") ? kv.get("path") : "auto");
  cc.seed = seed;
  return cc;
}

std::string trajectory_csv(const TrajectoryRecord &rec) {
  std::ostringstream os;
  os << "t,S_half,S_quarter,N_X,N_Z,PE_Z,PE_X\n";
  for (size_t i = 0; i < rec.steps(); i++) {
    os << (i + 1) << ',' << rec.s_half[i] << ',' << rec.s_quarter[i] << ','
       << rec.n_x[i] << ',' << rec.n_z[i] << ',' << rec.pe_z[i] << ','
       << rec.pe_x[i] << '\n';
  }
  return os.str();
}

// Classical-system inputs shared by the renyi/kw/finite-beta/support kinds.
struct ClassicalSource {
  bool from_file = false;
  DisorderGrid file_grid;
  size_t L = 0, T = 0;
  double p = 0.0;
  InitialCondition init;

  static ClassicalSource from(const KeyValueConfig &kv) {
    ClassicalSource src;
    if (kv.has("grid_file")) {
      std::ifstream f(kv.get("grid_file"));
      if (!f) {
        throw ConfigError("key 'grid_file': cannot open '" +
                          kv.get("grid_file") + "'");
      }
      src.from_file = true;
      src.file_grid = DisorderGrid::read(f);
      src.L = src.file_grid.L;
      src.T = src.file_grid.T;
    } else {
      src.L = config_size_required(kv, "L");
      src.T = config_size_required(kv, "T");
      src.p = config_double_required(kv, "p");
    }
    std::string pin = kv.has("pin") ? kv.get("pin") : "row1";
    if (pin == "row1") {
      src.init = InitialCondition::fix_row1(src.L);
    } else if (pin == "rows12") {
      src.init = InitialCondition::fix_rows12(src.L);
    } else if (pin == "none") {
      src.init = InitialCondition::free_rows(src.L);
    } else {
      throw ConfigError("key 'pin': expected row1, rows12, or none");
    }
    return src;
  }

  DisorderGrid grid(uint64_t member_seed_v) const {
    if (from_file) return file_grid;
    return DisorderGrid::random_interior(L, T, p, member_seed_v);
  }
  ParityCheckSystem system(uint64_t member_seed_v) const {
    return build_parity_checks(grid(member_seed_v), init);
  }
};

json base_summary(const ExperimentConfig &cfg) {
  json j;
  j["kind"] = kind_name(cfg.kind);
  j["seed"] = cfg.seed;
  j["ensemble"] = cfg.ensemble;
  return j;
}

ExperimentResult finish(const ExperimentConfig &cfg, ArtifactDir &dir,
                        json summary, std::vector<PlotSpec> plots) {
  dir.write("config.txt", cfg.kv.echo());
  summary["files"] = dir.files;
  dir.write("result.json", summary.dump(2) + "\n");
  write_manifest(dir.root.string(), plots);
  dir.files.push_back("manifest.json");
  ExperimentResult out;
  out.out_dir = dir.root.string();
  out.files = dir.files;
  out.summary_json = summary.dump(2) + "\n";
  return out;
}

ExperimentResult run_circuit_trajectory(const ExperimentConfig &cfg) {
  ArtifactDir dir(cfg.out_dir);
  std::vector<TrajectoryRecord> recs(cfg.ensemble);
#pragma omp parallel for schedule(dynamic)
  for (int64_t i = 0; i < int64_t(cfg.ensemble); i++) {
    CircuitConfig cc =
        circuit_config_from(cfg.kv, member_seed(cfg.seed, uint64_t(i)));
    recs[size_t(i)] = run_circuit(cc).record;
  }
  for (size_t i = 0; i < recs.size(); i++) {
    dir.write("trajectory_" + std::to_string(i) + ".csv",
              trajectory_csv(recs[i]));
  }

  size_t steps = recs[0].steps();
  std::ostringstream os;
  os << "t,S_half_mean,S_half_stderr,S_quarter_mean,S_quarter_stderr\n";
  std::vector<double> t_axis(steps), s_half_mean(steps);
  for (size_t k = 0; k < steps; k++) {
    std::vector<double> sh, sq;
    for (const TrajectoryRecord &r : recs) {
      sh.push_back(double(r.s_half[k]));
      sq.push_back(double(r.s_quarter[k]));
    }
    MeanErr mh = mean_stderr(sh), mq = mean_stderr(sq);
    t_axis[k] = double(k + 1);
    s_half_mean[k] = mh.mean;
    os << (k + 1) << ',' << fmt(mh.mean) << ',' << fmt(mh.stderr_) << ','
       << fmt(mq.mean) << ',' << fmt(mq.stderr_) << '\n';
  }
  dir.write("trajectory_mean.csv", os.str());

  size_t L = config_size_required(cfg.kv, "L");
  size_t t_max = config_size_required(cfg.kv, "t_max");
  json summary = base_summary(cfg);
  summary["L"] = L;
  summary["t_max"] = t_max;
  summary["p"] = config_double_required(cfg.kv, "p");
  if (t_max > L) {
    // Log-spaced subsample so every decade carries equal fit weight.
    std::vector<double> ft, fs;
    size_t prev = 0;
    for (double u = std::log10(double(L));
         u <= std::log10(double(t_max)) + 1e-12; u += 0.04) {
      size_t tt = size_t(std::llround(std::pow(10.0, u)));
      if (tt < 1 || tt > steps || tt == prev) continue;
      ft.push_back(double(tt));
      fs.push_back(s_half_mean[tt - 1]);
      prev = tt;
    }
    LineFit f = fit_log10(ft, fs, double(L), double(t_max));
    summary["log10_slope"] = f.slope;
    summary["log10_intercept"] = f.intercept;
  }
  std::vector<PlotSpec> plots(1);
  plots[0].data_file = "trajectory_mean.csv";
  plots[0].x = "t";
  plots[0].y = "S_half_mean";
  plots[0].x_scale = "log";
  plots[0].series = "L=" + std::to_string(L);
  plots[0].annotation = "half-cut entropy growth";
  return finish(cfg, dir, std::move(summary), std::move(plots));
}

ExperimentResult run_mipt_sweep(const ExperimentConfig &cfg) {
  ArtifactDir dir(cfg.out_dir);
  std::vector<double> p_grid = config_double_list(cfg.kv, "p_grid");
  std::ostringstream os;
  os << "p,s_half_mean,s_half_stderr,n\n";
  json jp = json::array(), jm = json::array();
  for (size_t gi = 0; gi < p_grid.size(); gi++) {
    uint64_t point_seed = member_seed(cfg.seed, gi);
    std::vector<double> vals(cfg.ensemble);
#pragma omp parallel for schedule(dynamic)
    for (int64_t i = 0; i < int64_t(cfg.ensemble); i++) {
      KeyValueConfig kv = cfg.kv;
      kv.set("p", fmt(p_grid[gi]));
      CircuitConfig cc =
          circuit_config_from(kv, member_seed(point_seed, uint64_t(i)));
      vals[size_t(i)] = steady_window_mean(run_circuit(cc).record.s_half);
    }
    MeanErr me = mean_stderr(vals);
    os << fmt(p_grid[gi]) << ',' << fmt(me.mean) << ',' << fmt(me.stderr_)
       << ',' << me.n << '\n';
    jp.push_back(p_grid[gi]);
    jm.push_back(me.mean);
  }
  dir.write("mipt.csv", os.str());
  json summary = base_summary(cfg);
  summary["p_grid"] = jp;
  summary["s_half_mean"] = jm;
  std::vector<PlotSpec> plots(1);
  plots[0].data_file = "mipt.csv";
  plots[0].x = "p";
  plots[0].y = "s_half_mean";
  plots[0].annotation = "steady-state half-cut entropy vs p";
  return finish(cfg, dir, std::move(summary), std::move(plots));
}

ExperimentResult run_renyi_classical(const ExperimentConfig &cfg) {
  ArtifactDir dir(cfg.out_dir);
  ClassicalSource src = ClassicalSource::from(cfg.kv);
  size_t x0 = config_size(cfg.kv, "x0", 0);
  size_t x1 = config_size(cfg.kv, "x1", src.L / 2);
  std::string method = cfg.kv.has("method") ? cfg.kv.get("method") : "both";
  if (method != "replica" && method != "groups" && method != "both") {
    throw ConfigError("key 'method': expected replica, groups, or both");
  }

  struct Row {
    uint64_t seed;
    Renyi2Replicas rep;
    int64_t groups = 0;
    bool have_rep = false, have_groups = false;
  };
  std::vector<Row> rows(cfg.ensemble);
#pragma omp parallel for schedule(dynamic)
  for (int64_t i = 0; i < int64_t(cfg.ensemble); i++) {
    Row &row = rows[size_t(i)];
    row.seed = member_seed(cfg.seed, uint64_t(i));
    ParityCheckSystem sys = src.system(row.seed);
    if (method != "groups") {
      row.rep = renyi2_via_replicas(sys, x0, x1);
      row.have_rep = true;
    }
    if (method != "replica") {
      row.groups = renyi2_via_groups(sys, x0, x1);
      row.have_groups = true;
    }
  }

  std::ostringstream os;
  os << "member,seed,k2,k4,s2_replicas,s2_groups,methods_agree\n";
  std::vector<double> s2s;
  bool all_agree = true;
  for (size_t i = 0; i < rows.size(); i++) {
    const Row &r = rows[i];
    os << i << ',' << r.seed << ',';
    if (r.have_rep) os << r.rep.k2;
    os << ',';
    if (r.have_rep) os << r.rep.k4;
    os << ',';
    if (r.have_rep) os << r.rep.s2_bits;
    os << ',';
    if (r.have_groups) os << r.groups;
    os << ',';
    if (r.have_rep && r.have_groups) {
      bool agree = r.rep.s2_bits == r.groups;
      all_agree = all_agree && agree;
      os << (agree ? 1 : 0);
    }
    os << '\n';
    s2s.push_back(double(r.have_rep ? r.rep.s2_bits : r.groups));
  }
  dir.write("renyi.csv", os.str());

  MeanErr me = mean_stderr(s2s);
  json summary = base_summary(cfg);
  summary["method"] = method;
  summary["x0"] = x0;
  summary["x1"] = x1;
  summary["S2"] = rows[0].have_rep ? rows[0].rep.s2_bits : rows[0].groups;
  if (rows[0].have_rep) {
    summary["k2"] = rows[0].rep.k2;
    summary["k4"] = rows[0].rep.k4;
  }
  if (method == "both") summary["methods_agree"] = all_agree;
  summary["s2_mean"] = me.mean;
  summary["s2_stderr"] = me.stderr_;
  std::vector<PlotSpec> plots;
  return finish(cfg, dir, std::move(summary), std::move(plots));
}

ExperimentResult run_kw_check(const ExperimentConfig &cfg) {
  ArtifactDir dir(cfg.out_dir);
  ClassicalSource src = ClassicalSource::from(cfg.kv);
  double beta = config_double_required(cfg.kv, "beta");
  size_t n_max = config_size(cfg.kv, "n_max", kDefaultNMax);
  size_t q_max = config_size(cfg.kv, "q_max", kDefaultQMax);

  std::ostringstream os;
  os << "member,seed,Q,logZ_brute,logZ_dual,residual\n";
  double max_residual = 0.0;
  KwIdentityResult first;
  for (size_t i = 0; i < cfg.ensemble; i++) {
    uint64_t seed_i = member_seed(cfg.seed, i);
    ParityCheckSystem sys = src.system(seed_i);
    KwIdentityResult r = kw_identity_check(sys, beta, n_max, q_max);
    if (i == 0) first = r;
    max_residual = std::max(max_residual, r.residual);
    os << i << ',' << seed_i << ',' << r.q << ',' << fmt(r.log_z_brute) << ','
       << fmt(r.log_z_dual) << ',' << fmt(r.residual) << '\n';
  }
  dir.write("kw.csv", os.str());

  json summary = base_summary(cfg);
  summary["beta"] = beta;
  summary["Q"] = first.q;
  summary["logZ_brute"] = first.log_z_brute;
  summary["logZ_dual"] = first.log_z_dual;
  summary["residual"] = first.residual;
  summary["max_residual"] = max_residual;
  return finish(cfg, dir, std::move(summary), {});
}

ExperimentResult run_finite_beta(const ExperimentConfig &cfg) {
  ArtifactDir dir(cfg.out_dir);
  ClassicalSource src = ClassicalSource::from(cfg.kv);
  size_t x0 = config_size(cfg.kv, "x0", 0);
  size_t x1 = config_size(cfg.kv, "x1", src.L / 2);
  std::vector<double> betas = config_double_list(cfg.kv, "beta_grid");
  FiniteBetaOptions opts;
  opts.q_max = config_size(cfg.kv, "q_max", kDefaultQMax);
  opts.n_max = config_size(cfg.kv, "n_max", kDefaultNMax);

  std::vector<std::vector<double>> s2(betas.size());
  for (size_t bi = 0; bi < betas.size(); bi++) s2[bi].resize(cfg.ensemble);
#pragma omp parallel for schedule(dynamic)
  for (int64_t i = 0; i < int64_t(cfg.ensemble); i++) {
    ParityCheckSystem sys = src.system(member_seed(cfg.seed, uint64_t(i)));
    for (size_t bi = 0; bi < betas.size(); bi++) {
      s2[bi][size_t(i)] = finite_beta_renyi2(sys, x0, x1, betas[bi], opts);
    }
  }

  std::ostringstream os;
  os << "beta,s2_nats_mean,s2_nats_stderr,n\n";
  json jb = json::array(), jm = json::array();
  for (size_t bi = 0; bi < betas.size(); bi++) {
    MeanErr me = mean_stderr(s2[bi]);
    os << fmt(betas[bi]) << ',' << fmt(me.mean) << ',' << fmt(me.stderr_)
       << ',' << me.n << '\n';
    jb.push_back(betas[bi]);
    jm.push_back(me.mean);
  }
  dir.write("finite_beta.csv", os.str());

  json summary = base_summary(cfg);
  summary["betas"] = jb;
  summary["s2_nats_mean"] = jm;
  if (betas.size() == 1) {
    summary["beta"] = betas[0];
    summary["S2_nats"] = jm[0];
  }
  std::vector<PlotSpec> plots(1);
  plots[0].data_file = "finite_beta.csv";
  plots[0].x = "beta";
  plots[0].y = "s2_nats_mean";
  plots[0].annotation = "half-cut Renyi-2 vs inverse temperature";
  return finish(cfg, dir, std::move(summary), std::move(plots));
}

ExperimentResult run_mcmc_quench(const ExperimentConfig &cfg) {
  ArtifactDir dir(cfg.out_dir);
  size_t L = config_size_required(cfg.kv, "L");
  double p = config_double_required(cfg.kv, "p");
  double beta = config_double_required(cfg.kv, "beta");
  double t_max = config_double_required(cfg.kv, "t_max");
  QuenchOptions opts;
  opts.samples = config_size(cfg.kv, "samples", 50);
  opts.t_min = config_double(cfg.kv, "t_min", 1e-2);
  opts.max_events = config_u64(cfg.kv, "max_events", UINT64_MAX);

  std::vector<QuenchTrace> traces =
      run_quench_ensemble(L, p, beta, t_max, cfg.seed, cfg.ensemble, opts);
  for (size_t i = 0; i < traces.size(); i++) {
    std::ostringstream os;
    write_quench_csv(os, traces[i]);
    dir.write("quench_" + std::to_string(i) + ".csv", os.str());
  }

  size_t min_len = traces[0].times.size();
  for (const QuenchTrace &t : traces) {
    min_len = std::min(min_len, t.times.size());
  }
  std::ostringstream os;
  os << "t,epsilon_mean,epsilon_stderr\n";
  for (size_t k = 0; k < min_len; k++) {
    std::vector<double> es;
    for (const QuenchTrace &t : traces) es.push_back(t.epsilon[k]);
    MeanErr me = mean_stderr(es);
    os << fmt(traces[0].times[k]) << ',' << fmt(me.mean) << ','
       << fmt(me.stderr_) << '\n';
  }
  dir.write("quench_mean.csv", os.str());

  json summary = base_summary(cfg);
  summary["L"] = L;
  summary["p"] = p;
  summary["beta"] = beta;
  summary["t_max"] = t_max;
  json ev = json::array(), fin = json::array();
  for (const QuenchTrace &t : traces) {
    ev.push_back(t.events);
    fin.push_back(t.epsilon.empty() ? 0.0 : t.epsilon.back());
  }
  summary["events"] = ev;
  summary["final_epsilon"] = fin;
  std::vector<PlotSpec> plots(1);
  plots[0].data_file = "quench_mean.csv";
  plots[0].x = "t";
  plots[0].y = "epsilon_mean";
  plots[0].x_scale = "log";
  plots[0].annotation = "energy-density relaxation";
  return finish(cfg, dir, std::move(summary), std::move(plots));
}

ExperimentResult run_collapse(const ExperimentConfig &cfg) {
  ArtifactDir dir(cfg.out_dir);
  std::vector<std::string> files = config_string_list(cfg.kv, "files");
  std::vector<QuenchTrace> traces;
  for (const std::string &f : files) {
    std::ifstream is(f);
    if (!is) throw ConfigError("key 'files': cannot open '" + f + "'");
    traces.push_back(read_quench_csv(is));
  }
  size_t grid_points = config_size(cfg.kv, "grid_points", 200);

  std::vector<double> expo;
  if (cfg.kv.has("exponents")) {
    expo = config_double_list(cfg.kv, "exponents");
    if (expo.size() != traces.size()) {
      throw ConfigError("key 'exponents': need one value per file");
    }
  } else {
    for (const QuenchTrace &t : traces) {
      if (!(t.beta > 0.0)) {
        throw ConfigError("trace metadata lacks beta; pass 'exponents'");
      }
      expo.push_back(1.0 / t.beta);
    }
  }
  CollapseCurves collapsed = collapse_transform(traces, expo, grid_points);
  CollapseCurves raw = collapse_transform(
      traces, std::vector<double>(traces.size(), 1.0), grid_points);

  std::ostringstream os;
  os << "u";
  for (size_t i = 0; i < traces.size(); i++) os << ",curve" << i;
  os << '\n';
  for (size_t k = 0; k < collapsed.abscissa.size(); k++) {
    os << fmt(collapsed.abscissa[k]);
    for (size_t i = 0; i < traces.size(); i++) {
      os << ',' << fmt(collapsed.curves[i][k]);
    }
    os << '\n';
  }
  dir.write("collapse.csv", os.str());

  json summary = base_summary(cfg);
  summary["score"] = collapsed.score;
  summary["score_raw"] = raw.score;
  summary["improvement_ratio"] =
      collapsed.score > 0.0 ? raw.score / collapsed.score
                            : std::numeric_limits<double>::infinity();
  std::vector<PlotSpec> plots(1);
  plots[0].data_file = "collapse.csv";
  plots[0].x = "u";
  plots[0].y = "curve0";
  plots[0].x_scale = "log";
  plots[0].annotation = "rescaled-time collapse";
  return finish(cfg, dir, std::move(summary), std::move(plots));
}

ExperimentResult run_support_stats(const ExperimentConfig &cfg) {
  ArtifactDir dir(cfg.out_dir);
  ClassicalSource src = ClassicalSource::from(cfg.kv);

  struct Row {
    uint64_t seed = 0;
    size_t dim = 0;
    double frac = 0.0;
    std::vector<uint64_t> histogram;
  };
  std::vector<Row> rows(cfg.ensemble);
#pragma omp parallel for schedule(dynamic)
  for (int64_t i = 0; i < int64_t(cfg.ensemble); i++) {
    Row &row = rows[size_t(i)];
    row.seed = member_seed(cfg.seed, uint64_t(i));
    ParityCheckSystem sys = src.system(row.seed);
    SymmetryBasis basis = symmetry_basis(sys);
    BoundaryGroupReport rep = boundary_quotient_generators(sys, basis);
    SupportStatistics st = support_statistics(rep, src.L);
    row.dim = st.dim;
    row.frac = st.extensive_fraction;
    row.histogram.assign(st.histogram.begin(), st.histogram.end());
  }

  std::ostringstream os;
  os << "member,seed,dim,extensive_fraction\n";
  std::vector<double> fracs, dims;
  std::vector<uint64_t> hist(2 * src.L + 1, 0);
  for (size_t i = 0; i < rows.size(); i++) {
    os << i << ',' << rows[i].seed << ',' << rows[i].dim << ','
       << fmt(rows[i].frac) << '\n';
    fracs.push_back(rows[i].frac);
    dims.push_back(double(rows[i].dim));
    for (size_t s = 0; s < rows[i].histogram.size() && s < hist.size(); s++) {
      hist[s] += rows[i].histogram[s];
    }
  }
  dir.write("support.csv", os.str());
  std::ostringstream oh;
  oh << "support,count\n";
  for (size_t s = 0; s < hist.size(); s++) oh << s << ',' << hist[s] << '\n';
  dir.write("histogram.csv", oh.str());

  MeanErr mf = mean_stderr(fracs), md = mean_stderr(dims);
  json summary = base_summary(cfg);
  summary["extensive_fraction_mean"] = mf.mean;
  summary["extensive_fraction_stderr"] = mf.stderr_;
  summary["dim_mean"] = md.mean;
  std::vector<PlotSpec> plots(1);
  plots[0].data_file = "histogram.csv";
  plots[0].x = "support";
  plots[0].y = "count";
  plots[0].annotation = "boundary generator support distribution";
  return finish(cfg, dir, std::move(summary), std::move(plots));
}

// Scalar observable per kind for sweep aggregation.
double scalar_observable(const ExperimentConfig &cfg, uint64_t seed_i) {
  switch (cfg.kind) {
    case ExperimentKind::kCircuitTrajectory: {
      CircuitConfig cc = circuit_config_from(cfg.kv, seed_i);
      return steady_window_mean(run_circuit(cc).record.s_half);
    }
    case ExperimentKind::kRenyiClassical: {
      ClassicalSource src = ClassicalSource::from(cfg.kv);
      ParityCheckSystem sys = src.system(seed_i);
      size_t x0 = config_size(cfg.kv, "x0", 0);
      size_t x1 = config_size(cfg.kv, "x1", src.L / 2);
      return double(renyi2_via_groups(sys, x0, x1));
    }
    case ExperimentKind::kKwCheck: {
      ClassicalSource src = ClassicalSource::from(cfg.kv);
      return kw_identity_check(src.system(seed_i),
                               config_double_required(cfg.kv, "beta"),
                               config_size(cfg.kv, "n_max", kDefaultNMax),
                               config_size(cfg.kv, "q_max", kDefaultQMax))
          .residual;
    }
    case ExperimentKind::kFiniteBetaSweep: {
      ClassicalSource src = ClassicalSource::from(cfg.kv);
      ParityCheckSystem sys = src.system(seed_i);
      size_t x0 = config_size(cfg.kv, "x0", 0);
      size_t x1 = config_size(cfg.kv, "x1", src.L / 2);
      FiniteBetaOptions opts;
      opts.q_max = config_size(cfg.kv, "q_max", kDefaultQMax);
      opts.n_max = config_size(cfg.kv, "n_max", kDefaultNMax);
      std::vector<double> betas = config_double_list(cfg.kv, "beta_grid");
      double acc = 0.0;
      for (double b : betas) acc += finite_beta_renyi2(sys, x0, x1, b, opts);
      return acc / double(betas.size());
    }
    case ExperimentKind::kMcmcQuench: {
      QuenchOptions opts;
      opts.samples = config_size(cfg.kv, "samples", 50);
      opts.t_min = config_double(cfg.kv, "t_min", 1e-2);
      opts.max_events = config_u64(cfg.kv, "max_events", UINT64_MAX);
      QuenchTrace t = run_quench(config_size_required(cfg.kv, "L"),
                                 config_double_required(cfg.kv, "p"),
                                 config_double_required(cfg.kv, "beta"),
                                 config_double_required(cfg.kv, "t_max"),
                                 seed_i, opts);
      return t.epsilon.empty() ? 0.0 : t.epsilon.back();
    }
    case ExperimentKind::kSupportStats: {
      ClassicalSource src = ClassicalSource::from(cfg.kv);
      ParityCheckSystem sys = src.system(seed_i);
      SymmetryBasis basis = symmetry_basis(sys);
      BoundaryGroupReport rep = boundary_quotient_generators(sys, basis);
      return support_statistics(rep, src.L).extensive_fraction;
    }
    default:
      throw ConfigError(std::string("kind '") + kind_name(cfg.kind) +
                        "' has no sweep observable");
  }
}

const char *observable_name(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::kCircuitTrajectory: return "steady_state_s_half";
    case ExperimentKind::kRenyiClassical: return "s2_bits";
    case ExperimentKind::kKwCheck: return "residual";
    case ExperimentKind::kFiniteBetaSweep: return "s2_nats";
    case ExperimentKind::kMcmcQuench: return "final_epsilon";
    case ExperimentKind::kSupportStats: return "extensive_fraction";
    default: return "observable";
  }
}

}  // namespace

void write_manifest(const std::string &out_dir,
                    const std::vector<PlotSpec> &plots) {
  json j;
  j["plots"] = json::array();
  for (const PlotSpec &p : plots) {
    if (!fs::exists(fs::path(out_dir) / p.data_file)) {
      throw InvariantError("manifest references missing file '" + p.data_file +
                           "'");
    }
    json e;
    e["data"] = p.data_file;
    e["x"] = p.x;
    e["y"] = p.y;
    e["x_scale"] = p.x_scale;
    e["y_scale"] = p.y_scale;
    e["series"] = p.series;
    e["annotation"] = p.annotation;
    j["plots"].push_back(e);
  }
  std::ofstream f(fs::path(out_dir) / "manifest.json", std::ios::binary);
  if (!f) throw std::runtime_error("cannot write manifest.json");
  f << j.dump(2) << "\n";
}

InitSpec parse_init_spec(const std::string &s) {
  InitSpec spec;
  if (s == "x") {
    spec.kind = InitialStateKind::kUniformX;
  } else if (s == "z") {
    spec.kind = InitialStateKind::kUniformZ;
  } else if (s == "staggered") {
    spec.kind = InitialStateKind::kStaggered;
  } else if (s.rfind("random:", 0) == 0) {
    spec.kind = InitialStateKind::kRandomPX;
    try {
      spec.p_x = std::stod(s.substr(7));
    } catch (const std::exception &) {
      throw ConfigError("init 'random:<pX>': bad pX in '" + s + "'");
    }
    if (spec.p_x < 0.0 || spec.p_x > 1.0) {
      throw ConfigError("init 'random:<pX>': pX must be in [0,1]");
    }
  } else {
    throw ConfigError("init: expected x, z, staggered, or random:<pX>; got '" +
                      s + "'");
  }
  return spec;
}

PerturbationConfig parse_perturb_spec(const std::string &name, double rate) {
  PerturbationConfig pc;
  if (name == "none") {
    pc.kind = PerturbationConfig::kNone;
  } else if (name == "flipped-cnot") {
    pc.kind = PerturbationConfig::kFlippedCnot;
  } else if (name == "cz") {
    pc.kind = PerturbationConfig::kCzSubstitution;
  } else {
    throw ConfigError("perturb: expected none, flipped-cnot, or cz; got '" +
                      name + "'");
  }
  pc.rate = rate;
  if (pc.kind != PerturbationConfig::kNone && (rate < 0.0 || rate > 1.0)) {
    throw ConfigError("perturb_rate: must be in [0,1]");
  }
  return pc;
}

SimPath parse_path_spec(const std::string &s) {
  if (s == "auto") return SimPath::kAuto;
  if (s == "reference") return SimPath::kReference;
  if (s == "split") return SimPath::kSplit;
  throw ConfigError("path: expected auto, reference, or split; got '" + s +
                    "'");
}

LineFit fit_linear(const std::vector<double> &x, const std::vector<double> &y,
                   double lo, double hi) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0, n = 0;
  for (size_t i = 0; i < x.size() && i < y.size(); i++) {
    if (x[i] < lo || x[i] > hi) continue;
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
    n += 1.0;
  }
  if (n < 2.0) throw std::invalid_argument("fit window has fewer than 2 points");
  LineFit f;
  f.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  f.intercept = (sy - f.slope * sx) / n;
  return f;
}

LineFit fit_log10(const std::vector<double> &t, const std::vector<double> &y,
                  double t_lo, double t_hi) {
  std::vector<double> lx;
  std::vector<double> ly;
  for (size_t i = 0; i < t.size() && i < y.size(); i++) {
    if (t[i] < t_lo || t[i] > t_hi || !(t[i] > 0.0)) continue;
    lx.push_back(std::log10(t[i]));
    ly.push_back(y[i]);
  }
  return fit_linear(lx, ly, -1e300, 1e300);
}

void write_quench_csv(std::ostream &os, const QuenchTrace &trace) {
  os << "# L=" << trace.L << " p=" << std::setprecision(17) << trace.p
     << " beta=" << trace.beta << " seed=" << trace.seed
     << " events=" << trace.events << " completed=" << (trace.completed ? 1 : 0)
     << " truncated=" << (trace.truncated ? 1 : 0) << "\n";
  os << "t,epsilon\n";
  os << std::setprecision(17);
  for (size_t i = 0; i < trace.times.size(); i++) {
    os << trace.times[i] << ',' << trace.epsilon[i] << '\n';
  }
}

QuenchTrace read_quench_csv(std::istream &is) {
  QuenchTrace trace;
  std::string line;
  bool have_header = false;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::istringstream meta(line.substr(1));
      std::string tok;
      while (meta >> tok) {
        size_t eq = tok.find('=');
        if (eq == std::string::npos) continue;
        std::string key = tok.substr(0, eq), val = tok.substr(eq + 1);
        try {
          if (key == "L") trace.L = std::stoul(val);
          else if (key == "p") trace.p = std::stod(val);
          else if (key == "beta") trace.beta = std::stod(val);
          else if (key == "seed") trace.seed = std::stoull(val);
          else if (key == "events") trace.events = std::stoull(val);
          else if (key == "completed") trace.completed = val != "0";
          else if (key == "truncated") trace.truncated = val != "0";
        } catch (const std::exception &) {
          throw std::runtime_error("bad trace metadata token '" + tok + "'");
        }
      }
      continue;
    }
    if (!have_header) {
      if (line != "t,epsilon") {
        throw std::runtime_error("expected header 't,epsilon', got '" + line +
                                 "'");
      }
      have_header = true;
      continue;
    }
    size_t comma = line.find(',');
    if (comma == std::string::npos) {
      throw std::runtime_error("bad trace row '" + line + "'");
    }
    try {
      trace.times.push_back(std::stod(line.substr(0, comma)));
      trace.epsilon.push_back(std::stod(line.substr(comma + 1)));
    } catch (const std::exception &) {
      throw std::runtime_error("bad trace row '" + line + "'");
    }
  }
  if (!have_header) throw std::runtime_error("trace csv missing header");
  return trace;
}

ExperimentResult run_experiment(const ExperimentConfig &cfg) {
  switch (cfg.kind) {
    case ExperimentKind::kCircuitTrajectory: return run_circuit_trajectory(cfg);
    case ExperimentKind::kMiptSweep: return run_mipt_sweep(cfg);
    case ExperimentKind::kRenyiClassical: return run_renyi_classical(cfg);
    case ExperimentKind::kKwCheck: return run_kw_check(cfg);
    case ExperimentKind::kFiniteBetaSweep: return run_finite_beta(cfg);
    case ExperimentKind::kMcmcQuench: return run_mcmc_quench(cfg);
    case ExperimentKind::kCollapse: return run_collapse(cfg);
    case ExperimentKind::kSupportStats: return run_support_stats(cfg);
  }
  throw ConfigError("unhandled experiment kind");
}

ExperimentResult run_sweep(const ExperimentConfig &cfg) {
  const std::string &key = cfg.kv.get("sweep_key");
  std::vector<std::string> values = config_string_list(cfg.kv, "sweep_values");
  const std::vector<std::string> forbidden = {"sweep_key", "sweep_values"};

  ArtifactDir dir(cfg.out_dir);
  std::ostringstream os;
  os << "param,value,mean,stderr,n\n";
  json jv = json::array(), jm = json::array(), je = json::array();
  for (size_t gi = 0; gi < values.size(); gi++) {
    KeyValueConfig kv;
    for (const auto &e : cfg.kv.entries()) {
      if (std::find(forbidden.begin(), forbidden.end(), e.first) !=
          forbidden.end()) {
        continue;
      }
      kv.set(e.first, e.second);
    }
    kv.set(key, values[gi]);
    ExperimentConfig sub = parse_experiment_config(kv);
    uint64_t point_seed = member_seed(cfg.seed, gi);
    std::vector<double> vals(cfg.ensemble);
#pragma omp parallel for schedule(dynamic)
    for (int64_t i = 0; i < int64_t(cfg.ensemble); i++) {
      vals[size_t(i)] = scalar_observable(sub, member_seed(point_seed, uint64_t(i)));
    }
    MeanErr me = mean_stderr(vals);
    os << key << ',' << values[gi] << ',' << fmt(me.mean) << ','
       << fmt(me.stderr_) << ',' << me.n << '\n';
    jv.push_back(values[gi]);
    jm.push_back(me.mean);
    je.push_back(me.stderr_);
  }
  dir.write("sweep.csv", os.str());

  json summary = base_summary(cfg);
  summary["sweep_key"] = key;
  summary["values"] = jv;
  summary["means"] = jm;
  summary["stderrs"] = je;
  summary["observable"] = observable_name(cfg.kind);
  std::vector<PlotSpec> plots(1);
  plots[0].data_file = "sweep.csv";
  plots[0].x = "value";
  plots[0].y = "mean";
  plots[0].series = key;
  plots[0].annotation = std::string(observable_name(cfg.kind)) + " vs " + key;
  return finish(cfg, dir, std::move(summary), std::move(plots));
}

}  // namespace plaq
