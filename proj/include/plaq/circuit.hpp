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

#ifndef PLAQ_CIRCUIT_HPP
#define PLAQ_CIRCUIT_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "plaq/plaquette.hpp"
#include "plaq/tableau.hpp"

namespace plaq {

// One time step on a ring of L unit cells (qubits a_x, b_x):
//   1. with probability p per cell, measure X on a_x and then Z on b_x
//      (all measurements before any gate);
//   2. CNOTs with control b_j and targets a_{j-1}, a_j, a_{j+1} (periodic);
//   3. swap a_x and b_x in every cell.
// Observables are recorded after the swap.

enum class InitialStateKind : uint8_t {
  kUniformX,   // every qubit in an X eigenstate
  kUniformZ,   // every qubit in a Z eigenstate
  kStaggered,  // a in Z, b in X
  kRandomPX,   // each qubit X with probability p_x, else Z
};

struct PerturbationConfig {
  enum Kind : uint8_t { kNone, kFlippedCnot, kCzSubstitution } kind = kNone;
  double rate = 0.0;  // per-gate probability of the modification
};

enum class SimPath : uint8_t { kAuto, kReference, kSplit };

struct CircuitConfig {
  size_t L = 0;
  size_t t_max = 0;
  double p = 0.0;
  InitialStateKind init = InitialStateKind::kUniformZ;
  double p_x = 0.5;  // only for kRandomPX
  PerturbationConfig perturb;
  uint64_t seed = 0;
  SimPath path = SimPath::kAuto;
};

// Per-step, per-cell measurement decisions; entry (step, x) with step in
// [1, steps].
struct MeasurementMask {
  size_t L = 0, steps = 0;
  std::vector<uint8_t> m;

  MeasurementMask() = default;
  MeasurementMask(size_t L_, size_t steps_) : L(L_), steps(steps_), m(L_ * steps_, 0) {}
  bool at(size_t x, size_t step) const { return m[(step - 1) * L + x] != 0; }
  void set(size_t x, size_t step, bool v) { m[(step - 1) * L + x] = v ? 1 : 0; }
};

// Per-step observable series, index 0 holding step t = 1. Sector counts are -1
// on steps where the state is not sector pure (possible only under the CZ
// perturbation).
struct TrajectoryRecord {
  std::vector<int64_t> s_half, s_quarter, n_x, n_z, pe_z, pe_x;
  size_t steps() const { return s_half.size(); }
};

struct CircuitRunResult {
  TrajectoryRecord record;
  MeasurementMask mask;
  Tableau final_state;
  CircuitRunResult() : final_state(0) {}
};

std::vector<PauliAxis> initial_axes(const CircuitConfig &cfg);

// Classical bottom-row pins matching an initial product state: a qubit
// prepared in a Z eigenstate pins its classical site (a_x on row 1, b_x on
// row 2).
InitialCondition initial_condition_for(const std::vector<PauliAxis> &axes);

CircuitRunResult run_circuit(const CircuitConfig &cfg);

// The measurement layout of a run as a disorder grid with T = steps + 2 rows:
// a measured cell (x, step u) becomes a q=1 site at (x, u). Rows T-1 and T
// stay q=5; they hold the final state.
DisorderGrid export_disorder(const MeasurementMask &mask);

// Conjugation action of one unperturbed, measurement-free step on a Z string
// over the 2L qubits (interleaved order). Used to cross-check the automaton.
BitVector step_z_string(const BitVector &v, size_t L);

}  // namespace plaq

#endif  // PLAQ_CIRCUIT_HPP
