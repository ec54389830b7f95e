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

#include "plaq/circuit.hpp"

#include <stdexcept>
#include <type_traits>

#include "plaq/rng.hpp"

namespace plaq {

std::vector<PauliAxis> initial_axes(const CircuitConfig &cfg) {
  std::vector<PauliAxis> axes(2 * cfg.L, PauliAxis::kZ);
  switch (cfg.init) {
    case InitialStateKind::kUniformX:
      axes.assign(2 * cfg.L, PauliAxis::kX);
      break;
    case InitialStateKind::kUniformZ:
      break;
    case InitialStateKind::kStaggered:
      for (size_t x = 0; x < cfg.L; x++) {
        axes[2 * x] = PauliAxis::kZ;
        axes[2 * x + 1] = PauliAxis::kX;
      }
      break;
    case InitialStateKind::kRandomPX: {
      // A dedicated stream, so the trajectory stream is unaffected by init.
      auto rng = make_rng(splitmix64(cfg.seed ^ 0xa11ce5));
      std::uniform_real_distribution<double> u(0.0, 1.0);
      for (size_t q = 0; q < 2 * cfg.L; q++) {
        axes[q] = u(rng) < cfg.p_x ? PauliAxis::kX : PauliAxis::kZ;
      }
      break;
    }
  }
  return axes;
}

InitialCondition initial_condition_for(const std::vector<PauliAxis> &axes) {
  size_t L = axes.size() / 2;
  InitialCondition ic = InitialCondition::free_rows(L);
  for (size_t x = 0; x < L; x++) {
    if (axes[2 * x] == PauliAxis::kZ) ic.pin_row1.set(x, true);
    if (axes[2 * x + 1] == PauliAxis::kZ) ic.pin_row2.set(x, true);
  }
  return ic;
}

namespace {

struct StepDraws {
  std::vector<uint8_t> measured;  // per cell
  std::vector<uint8_t> gate_mod;  // per gate: 0 normal, 1 flipped, 2 cz
};

void draw_step(const CircuitConfig &cfg, std::mt19937_64 &rng, StepDraws &d) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  d.measured.assign(cfg.L, 0);
  for (size_t x = 0; x < cfg.L; x++) d.measured[x] = u(rng) < cfg.p ? 1 : 0;
  if (cfg.perturb.kind == PerturbationConfig::kNone || cfg.perturb.rate <= 0.0) {
    d.gate_mod.assign(3 * cfg.L, 0);
    return;
  }
  d.gate_mod.assign(3 * cfg.L, 0);
  uint8_t mod = cfg.perturb.kind == PerturbationConfig::kFlippedCnot ? 1 : 2;
  for (size_t i = 0; i < 3 * cfg.L; i++) {
    if (u(rng) < cfg.perturb.rate) d.gate_mod[i] = mod;
  }
}

template <class Sim>
void apply_step(Sim &sim, size_t L, const StepDraws &d) {
  for (size_t x = 0; x < L; x++) {
    if (!d.measured[x]) continue;
    sim.measure_x(2 * x);
    sim.measure_z(2 * x + 1);
  }
  size_t gate = 0;
  for (size_t j = 0; j < L; j++) {
    size_t control = 2 * j + 1;  // b_j
    for (size_t dx : {L - 1, size_t(0), size_t(1)}) {
      size_t target = 2 * ((j + dx) % L);  // a_{j-1}, a_j, a_{j+1}
      uint8_t mod = d.gate_mod[gate++];
      if (mod == 0) {
        sim.apply_cnot(control, target);
      } else if (mod == 1) {
        sim.apply_cnot(target, control);
      } else {
        if constexpr (std::is_same_v<Sim, Tableau>) {
          sim.apply_cz(control, target);
        } else {
          throw std::logic_error("cz requires the reference tableau");
        }
      }
    }
  }
  for (size_t x = 0; x < L; x++) sim.apply_swap(2 * x, 2 * x + 1);
}

void record_observables(const Tableau &t, size_t L, TrajectoryRecord &rec) {
  rec.s_half.push_back((int64_t)t.entanglement_entropy_cells(0, L / 2));
  rec.s_quarter.push_back((int64_t)t.entanglement_entropy_cells(0, L / 4));
  auto sc = t.sector_counts();
  rec.n_x.push_back(sc ? (int64_t)sc->n_x : -1);
  rec.n_z.push_back(sc ? (int64_t)sc->n_z : -1);
  rec.pe_z.push_back((int64_t)t.participation_entropy_z());
  rec.pe_x.push_back((int64_t)t.participation_entropy_x());
}

void record_observables(const SplitTableau &t, size_t L, TrajectoryRecord &rec) {
  rec.s_half.push_back((int64_t)t.entanglement_entropy_cells(0, L / 2));
  rec.s_quarter.push_back((int64_t)t.entanglement_entropy_cells(0, L / 4));
  rec.n_x.push_back((int64_t)t.n_x());
  rec.n_z.push_back((int64_t)t.n_z());
  rec.pe_z.push_back((int64_t)t.participation_entropy_z());
  rec.pe_x.push_back((int64_t)t.participation_entropy_x());
}

template <class Sim>
CircuitRunResult run_with(const CircuitConfig &cfg, Sim sim) {
  CircuitRunResult out;
  out.mask = MeasurementMask(cfg.L, cfg.t_max);
  auto rng = make_rng(cfg.seed);
  StepDraws d;
  for (size_t t = 1; t <= cfg.t_max; t++) {
    draw_step(cfg, rng, d);
    for (size_t x = 0; x < cfg.L; x++) out.mask.set(x, t, d.measured[x]);
    apply_step(sim, cfg.L, d);
    record_observables(sim, cfg.L, out.record);
  }
  if constexpr (std::is_same_v<Sim, Tableau>) {
    out.final_state = sim;
  } else {
    out.final_state = sim.to_tableau();
  }
  return out;
}

}  // namespace

CircuitRunResult run_circuit(const CircuitConfig &cfg) {
  if (cfg.L < 2) throw std::invalid_argument("circuit needs L >= 2");
  bool needs_reference = cfg.perturb.kind == PerturbationConfig::kCzSubstitution;
  bool use_split;
  switch (cfg.path) {
    case SimPath::kReference: use_split = false; break;
    case SimPath::kSplit:
      if (needs_reference) throw std::invalid_argument("cz requires reference path");
      use_split = true;
      break;
    default: use_split = !needs_reference; break;
  }
  std::vector<PauliAxis> axes = initial_axes(cfg);
  if (use_split) {
    return run_with(cfg, SplitTableau::product_state(axes));
  }
  return run_with(cfg, Tableau::product_state(axes));
}

DisorderGrid export_disorder(const MeasurementMask &mask) {
  if (mask.L < 3) throw std::invalid_argument("export needs L >= 3");
  DisorderGrid g(mask.L, mask.steps + 2);
  for (size_t u = 1; u <= mask.steps; u++) {
    for (size_t x = 0; x < mask.L; x++) {
      if (mask.at(x, u)) g.set(x, u, 1);
    }
  }
  return g;
}

BitVector step_z_string(const BitVector &v, size_t L) {
  if (v.size() != 2 * L) throw std::invalid_argument("z string must cover 2L qubits");
  BitVector w = v;
  for (size_t j = 0; j < L; j++) {
    bool acc = w.get(2 * j + 1);
    acc ^= v.get(2 * ((j + L - 1) % L));
    acc ^= v.get(2 * j);
    acc ^= v.get(2 * ((j + 1) % L));
    w.set(2 * j + 1, acc);
  }
  for (size_t x = 0; x < L; x++) {
    bool a = w.get(2 * x), b = w.get(2 * x + 1);
    w.set(2 * x, b);
    w.set(2 * x + 1, a);
  }
  return w;
}

}  // namespace plaq
