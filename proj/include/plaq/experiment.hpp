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

#ifndef PLAQ_EXPERIMENT_HPP
#define PLAQ_EXPERIMENT_HPP

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "plaq/circuit.hpp"
#include "plaq/kmc.hpp"

namespace plaq {

// Bad or unknown configuration; maps to exit code 2.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string &what) : std::runtime_error(what) {}
};

// A runtime self-check failed; maps to exit code 4.
struct InvariantError : std::runtime_error {
  explicit InvariantError(const std::string &what) : std::runtime_error(what) {}
};

// Flat key = value lines; '#' comments; duplicate keys rejected.
class KeyValueConfig {
 public:
  static KeyValueConfig parse_text(const std::string &text);
  static KeyValueConfig parse_file(const std::string &path);

  bool has(const std::string &key) const;
  const std::string &get(const std::string &key) const;
  void set(const std::string &key, const std::string &value);

  // Canonical text form; parses back to an equal configuration.
  std::string echo() const;
  const std::vector<std::pair<std::string, std::string>> &entries() const {
    return entries_;
  }
  bool operator==(const KeyValueConfig &other) const;

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
};

// Typed readers; every failure names the key.
uint64_t config_u64(const KeyValueConfig &kv, const std::string &key,
                    uint64_t fallback);
size_t config_size(const KeyValueConfig &kv, const std::string &key,
                   size_t fallback);
double config_double(const KeyValueConfig &kv, const std::string &key,
                     double fallback);
uint64_t config_u64_required(const KeyValueConfig &kv, const std::string &key);
size_t config_size_required(const KeyValueConfig &kv, const std::string &key);
double config_double_required(const KeyValueConfig &kv, const std::string &key);
std::vector<double> config_double_list(const KeyValueConfig &kv,
                                       const std::string &key);
std::vector<std::string> config_string_list(const KeyValueConfig &kv,
                                            const std::string &key);

enum class ExperimentKind {
  kCircuitTrajectory,
  kMiptSweep,
  kRenyiClassical,
  kKwCheck,
  kFiniteBetaSweep,
  kMcmcQuench,
  kCollapse,
  kSupportStats,
};

const char *kind_name(ExperimentKind kind);
ExperimentKind kind_from_name(const std::string &name);

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::kCircuitTrajectory;
  uint64_t seed = 1;
  size_t ensemble = 1;
  std::string out_dir;
  KeyValueConfig kv;
};

// Strict validation: required keys present, every key known for the kind.
ExperimentConfig parse_experiment_config(const KeyValueConfig &kv);
// Additionally expects sweep_key and sweep_values.
ExperimentConfig parse_sweep_config(const KeyValueConfig &kv);

// "x", "z", "staggered", or "random:<pX>".
struct InitSpec {
  InitialStateKind kind = InitialStateKind::kUniformZ;
  double p_x = 0.5;
};
InitSpec parse_init_spec(const std::string &s);
// "none", "flipped-cnot", or "cz", with the per-gate rate.
PerturbationConfig parse_perturb_spec(const std::string &name, double rate);
// "auto", "reference", or "split".
SimPath parse_path_spec(const std::string &s);

struct PlotSpec {
  std::string data_file;
  std::string x, y;
  std::string x_scale = "linear", y_scale = "linear";
  std::string series;
  std::string annotation;
};

// manifest.json listing the plots; every referenced data file must already
// exist in out_dir.
void write_manifest(const std::string &out_dir,
                    const std::vector<PlotSpec> &plots);

struct ExperimentResult {
  std::string out_dir;
  std::vector<std::string> files;  // names relative to out_dir
  std::string summary_json;        // contents of result.json
};

ExperimentResult run_experiment(const ExperimentConfig &cfg);

// One row per sweep value: mean and standard error of the kind's scalar
// observable over the ensemble.
ExperimentResult run_sweep(const ExperimentConfig &cfg);

// Worker count from the PLAQ_WORKERS environment variable, applied to the
// OpenMP runtime once at process start.
void apply_worker_env();
size_t configured_workers();

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
};

// Least squares y = slope*x + intercept over points with x in [lo, hi].
LineFit fit_linear(const std::vector<double> &x, const std::vector<double> &y,
                   double lo, double hi);
// Same with x replaced by log10(t).
LineFit fit_log10(const std::vector<double> &t, const std::vector<double> &y,
                  double t_lo, double t_hi);

// Trace CSV: "# key=value ..." metadata line, then "t,epsilon" rows.
void write_quench_csv(std::ostream &os, const QuenchTrace &trace);
QuenchTrace read_quench_csv(std::istream &is);

}  // namespace plaq

#endif  // PLAQ_EXPERIMENT_HPP
