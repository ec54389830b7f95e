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

// Timing comparison of the serial reference kernels against the parallel
// ones, plus event-throughput scaling of the kinetic Monte Carlo core.

#include <chrono>
#include <cstdio>
#include <random>

#include "plaq/bitmat.hpp"
#include "plaq/circuit.hpp"
#include "plaq/experiment.hpp"
#include "plaq/kmc.hpp"
#include "plaq/rng.hpp"

namespace {

using namespace plaq;

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

BitMatrix random_matrix(size_t rows, size_t cols, uint64_t seed) {
  std::mt19937_64 rng = make_rng(seed);
  BitMatrix m(rows, cols);
  for (size_t r = 0; r < rows; r++) {
    for (size_t c = 0; c < cols; c++) {
      if (rng() & 1) m.set(r, c, true);
    }
  }
  return m;
}

void bench_row_reduce() {
  const size_t dims[2] = {1000, 2500};
  printf("row_reduce (reduced echelon form, random square matrix)\n");
  printf("%8s %12s %12s %8s\n", "dim", "serial_ms", "parallel_ms", "match");
  for (size_t dim : dims) {
    BitMatrix base = random_matrix(dim, dim, 17 + dim);
    BitMatrix a = base, b = base;
    auto t0 = std::chrono::steady_clock::now();
    RowReduceResult ra = row_reduce(a, EliminationKernel::kSerial);
    double ta = seconds_since(t0);
    t0 = std::chrono::steady_clock::now();
    RowReduceResult rb = row_reduce(b, EliminationKernel::kParallel);
    double tb = seconds_since(t0);
    bool match = ra.rank == rb.rank && a.rows() == b.rows();
    printf("%8zu %12.2f %12.2f %8s\n", dim, ta * 1e3, tb * 1e3,
           match ? "yes" : "NO");
  }
}

void bench_circuit_paths() {
  printf("\nmeasurement circuit, dense vs sector-split state (t_max = 400)\n");
  printf("%8s %14s %12s %8s\n", "L", "reference_ms", "split_ms", "match");
  for (size_t L : {50, 100}) {
    CircuitConfig cfg;
    cfg.L = L;
    cfg.t_max = 400;
    cfg.p = 0.1;
    cfg.init = InitialStateKind::kUniformX;
    cfg.seed = 23;
    cfg.path = SimPath::kReference;
    auto t0 = std::chrono::steady_clock::now();
    CircuitRunResult ref = run_circuit(cfg);
    double ta = seconds_since(t0);
    cfg.path = SimPath::kSplit;
    t0 = std::chrono::steady_clock::now();
    CircuitRunResult split = run_circuit(cfg);
    double tb = seconds_since(t0);
    bool match = ref.record.s_half == split.record.s_half &&
                 ref.record.n_z == split.record.n_z;
    printf("%8zu %14.2f %12.2f %8s\n", L, ta * 1e3, tb * 1e3,
           match ? "yes" : "NO");
  }
}

void bench_kmc_throughput() {
  printf("\nkinetic Monte Carlo event throughput (p = 0, beta = 4)\n");
  printf("%8s %10s %14s %14s\n", "L", "spins", "events", "events_per_s");
  for (size_t L : {32, 64, 128, 256}) {
    KmcModel model(L, 0.0, 4.0, 29);
    std::mt19937_64 rng = make_rng(31);
    model.randomize_spins(rng);
    const uint64_t events = 2000000;
    auto t0 = std::chrono::steady_clock::now();
    for (uint64_t i = 0; i < events; i++) {
      if (model.kmc_step(rng).completed) break;
    }
    double dt = seconds_since(t0);
    printf("%8zu %10zu %14llu %14.3e\n", L, model.n(),
           (unsigned long long)model.events(), double(model.events()) / dt);
  }
}

}  // namespace

int main() {
  apply_worker_env();
  printf("workers: %zu\n\n", configured_workers());
  bench_row_reduce();
  bench_circuit_paths();
  bench_kmc_throughput();
  return 0;
}
