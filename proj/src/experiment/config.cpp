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

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "plaq/experiment.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace plaq {
namespace {

std::string trim(const std::string &s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

}  // namespace

KeyValueConfig KeyValueConfig::parse_text(const std::string &text) {
  KeyValueConfig kv;
  std::istringstream is(text);
  std::string line;
  size_t lineno = 0;
  while (std::getline(is, line)) {
    lineno++;
    size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    size_t eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(lineno) +
                        ": expected key = value");
    }
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty()) {
      throw ConfigError("line " + std::to_string(lineno) + ": empty key");
    }
    if (kv.has(key)) throw ConfigError("duplicate key '" + key + "'");
    kv.entries_.emplace_back(key, value);
  }
  return kv;
}

KeyValueConfig KeyValueConfig::parse_file(const std::string &path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_text(ss.str());
}

bool KeyValueConfig::has(const std::string &key) const {
  for (const auto &e : entries_) {
    if (e.first == key) return true;
  }
  return false;
}

const std::string &KeyValueConfig::get(const std::string &key) const {
  for (const auto &e : entries_) {
    if (e.first == key) return e.second;
  }
  throw ConfigError("missing key '" + key + "'");
}

void KeyValueConfig::set(const std::string &key, const std::string &value) {
  for (auto &e : entries_) {
    if (e.first == key) {
      e.second = value;
      return;
    }
  }
  entries_.emplace_back(key, value);
}

std::string KeyValueConfig::echo() const {
  std::vector<std::pair<std::string, std::string>> sorted = entries_;
  std::sort(sorted.begin(), sorted.end());
  std::ostringstream os;
  for (const auto &e : sorted) os << e.first << " = " << e.second << "\n";
  return os.str();
}

bool KeyValueConfig::operator==(const KeyValueConfig &other) const {
  auto a = entries_, b = other.entries_;
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  return a == b;
}

namespace {

uint64_t parse_u64(const std::string &key, const std::string &v) {
  try {
    size_t pos = 0;
    unsigned long long x = std::stoull(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return uint64_t(x);
  } catch (const std::exception &) {
    throw ConfigError("key '" + key + "': not an unsigned integer: '" + v + "'");
  }
}

double parse_double(const std::string &key, const std::string &v) {
  try {
    size_t pos = 0;
    double x = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception &) {
    throw ConfigError("key '" + key + "': not a number: '" + v + "'");
  }
}

std::vector<std::string> split_list(const std::string &v) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(v);
  while (std::getline(is, cur, ',')) {
    cur = trim(cur);
    if (!cur.empty()) out.push_back(cur);
  }
  return out;
}

}  // namespace

uint64_t config_u64(const KeyValueConfig &kv, const std::string &key,
                    uint64_t fallback) {
  return kv.has(key) ? parse_u64(key, kv.get(key)) : fallback;
}

size_t config_size(const KeyValueConfig &kv, const std::string &key,
                   size_t fallback) {
  return size_t(config_u64(kv, key, fallback));
}

double config_double(const KeyValueConfig &kv, const std::string &key,
                     double fallback) {
  return kv.has(key) ? parse_double(key, kv.get(key)) : fallback;
}

uint64_t config_u64_required(const KeyValueConfig &kv, const std::string &key) {
  return parse_u64(key, kv.get(key));
}

size_t config_size_required(const KeyValueConfig &kv, const std::string &key) {
  return size_t(config_u64_required(kv, key));
}

double config_double_required(const KeyValueConfig &kv,
                              const std::string &key) {
  return parse_double(key, kv.get(key));
}

std::vector<double> config_double_list(const KeyValueConfig &kv,
                                       const std::string &key) {
  std::vector<double> out;
  for (const std::string &s : split_list(kv.get(key))) {
    out.push_back(parse_double(key, s));
  }
  if (out.empty()) throw ConfigError("key '" + key + "': empty list");
  return out;
}

std::vector<std::string> config_string_list(const KeyValueConfig &kv,
                                            const std::string &key) {
  std::vector<std::string> out = split_list(kv.get(key));
  if (out.empty()) throw ConfigError("key '" + key + "': empty list");
  return out;
}

const char *kind_name(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::kCircuitTrajectory: return "circuit-trajectory";
    case ExperimentKind::kMiptSweep: return "mipt-sweep";
    case ExperimentKind::kRenyiClassical: return "renyi-classical";
    case ExperimentKind::kKwCheck: return "kw-check";
    case ExperimentKind::kFiniteBetaSweep: return "finite-beta-sweep";
    case ExperimentKind::kMcmcQuench: return "mcmc-quench";
    case ExperimentKind::kCollapse: return "collapse";
    case ExperimentKind::kSupportStats: return "support-stats";
  }
  return "?";
}

ExperimentKind kind_from_name(const std::string &name) {
  for (ExperimentKind k :
       {ExperimentKind::kCircuitTrajectory, ExperimentKind::kMiptSweep,
        ExperimentKind::kRenyiClassical, ExperimentKind::kKwCheck,
        ExperimentKind::kFiniteBetaSweep, ExperimentKind::kMcmcQuench,
        ExperimentKind::kCollapse, ExperimentKind::kSupportStats}) {
    if (name == kind_name(k)) return k;
  }
  throw ConfigError("unknown experiment kind '" + name + "'");
}

namespace {

const std::vector<std::string> &allowed_keys(ExperimentKind kind) {
  static const std::vector<std::string> common = {"kind", "seed", "ensemble",
                                                  "out"};
  auto with = [](std::initializer_list<const char *> extra) {
    std::vector<std::string> v = common;
    for (const char *e : extra) v.push_back(e);
    std::sort(v.begin(), v.end());
    return v;
  };
  static const std::vector<std::string> circuit =
      with({"L", "t_max", "p", "init", "perturb", "perturb_rate", "path"});
  static const std::vector<std::string> mipt =
      with({"L", "t_max", "init", "p_grid", "path"});
  static const std::vector<std::string> renyi =
      with({"grid_file", "L", "T", "p", "pin", "x0", "x1", "method"});
  static const std::vector<std::string> kw =
      with({"grid_file", "L", "T", "p", "pin", "beta", "n_max", "q_max"});
  static const std::vector<std::string> fb = with(
      {"grid_file", "L", "T", "p", "pin", "x0", "x1", "beta_grid", "n_max",
       "q_max"});
  static const std::vector<std::string> mcmc =
      with({"L", "p", "beta", "t_max", "t_min", "samples", "max_events"});
  static const std::vector<std::string> collapse =
      with({"files", "exponents", "grid_points"});
  static const std::vector<std::string> support =
      with({"L", "T", "p", "pin"});
  switch (kind) {
    case ExperimentKind::kCircuitTrajectory: return circuit;
    case ExperimentKind::kMiptSweep: return mipt;
    case ExperimentKind::kRenyiClassical: return renyi;
    case ExperimentKind::kKwCheck: return kw;
    case ExperimentKind::kFiniteBetaSweep: return fb;
    case ExperimentKind::kMcmcQuench: return mcmc;
    case ExperimentKind::kCollapse: return collapse;
    case ExperimentKind::kSupportStats: return support;
  }
  return common;
}

ExperimentConfig parse_common(const KeyValueConfig &kv,
                              const std::vector<std::string> &extra_allowed) {
  ExperimentConfig cfg;
  cfg.kind = kind_from_name(kv.get("kind"));
  const std::vector<std::string> &allowed = allowed_keys(cfg.kind);
  for (const auto &e : kv.entries()) {
    if (std::binary_search(allowed.begin(), allowed.end(), e.first)) continue;
    if (std::find(extra_allowed.begin(), extra_allowed.end(), e.first) !=
        extra_allowed.end()) {
      continue;
    }
    throw ConfigError("unknown key '" + e.first + "' for kind '" +
                      kind_name(cfg.kind) + "'");
  }
  cfg.seed = config_u64(kv, "seed", 1);
  cfg.ensemble = config_size(kv, "ensemble", 1);
  if (cfg.ensemble == 0) throw ConfigError("key 'ensemble': must be >= 1");
  cfg.out_dir = kv.has("out") ? kv.get("out") : "";
  cfg.kv = kv;
  return cfg;
}

}  // namespace

ExperimentConfig parse_experiment_config(const KeyValueConfig &kv) {
  return parse_common(kv, {});
}

ExperimentConfig parse_sweep_config(const KeyValueConfig &kv) {
  ExperimentConfig cfg = parse_common(kv, {"sweep_key", "sweep_values"});
  if (!kv.has("sweep_key") || !kv.has("sweep_values")) {
    throw ConfigError("sweep needs keys 'sweep_key' and 'sweep_values'");
  }
  return cfg;
}

void apply_worker_env() {
#ifdef _OPENMP
  const char *env = std::getenv("PLAQ_WORKERS");
  if (env == nullptr || *env == '\0') return;
  int n = std::atoi(env);
  if (n > 0) omp_set_num_threads(n);
#endif
}

size_t configured_workers() {
#ifdef _OPENMP
  return size_t(omp_get_max_threads());
#else
  return 1;
#endif
}

}  // namespace plaq
