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
#include <complex>
#include <random>
#include <vector>

#include "doctest.h"
#include "plaq/rng.hpp"
#include "plaq/tableau.hpp"

using namespace plaq;

namespace {

// Pauli string as a 2n-bit row: X block then Z block.
BitVector make_pauli(size_t n, const std::vector<size_t> &xs,
                     const std::vector<size_t> &zs) {
  BitVector v(2 * n);
  for (size_t q : xs) v.set(q, true);
  for (size_t q : zs) v.set(n + q, true);
  return v;
}

bool group_contains(const Tableau &t, const BitVector &pauli) {
  return in_row_space(t.generators(), pauli);
}

bool generators_commute(const Tableau &t) {
  size_t n = t.n();
  for (size_t i = 0; i < n; i++) {
    for (size_t j = i + 1; j < n; j++) {
      size_t sym = 0;
      for (size_t q = 0; q < n; q++) {
        sym ^= (t.x_bit(i, q) & t.z_bit(j, q)) ^ (t.z_bit(i, q) & t.x_bit(j, q));
      }
      if (sym) return false;
    }
  }
  return true;
}

using Cx = std::complex<double>;
using Dense = std::vector<std::vector<Cx>>;

Dense dense_identity(size_t dim) {
  Dense m(dim, std::vector<Cx>(dim, 0.0));
  for (size_t i = 0; i < dim; i++) m[i][i] = 1.0;
  return m;
}

Dense dense_mul(const Dense &a, const Dense &b) {
  size_t dim = a.size();
  Dense c(dim, std::vector<Cx>(dim, 0.0));
  for (size_t i = 0; i < dim; i++) {
    for (size_t k = 0; k < dim; k++) {
      if (std::abs(a[i][k]) < 1e-14) continue;
      for (size_t j = 0; j < dim; j++) c[i][j] += a[i][k] * b[k][j];
    }
  }
  return c;
}

// Hermitian Pauli i^{|x AND z|} X^x Z^z acting on basis states:
// |s> -> i^w (-1)^{z.s} |s XOR x>.
Dense dense_pauli(size_t n, const BitVector &x, const BitVector &z) {
  size_t dim = size_t(1) << n;
  size_t w = 0;
  for (size_t q = 0; q < n; q++) w += x.get(q) && z.get(q);
  Cx phase = std::pow(Cx(0.0, 1.0), double(w % 4));
  Dense m(dim, std::vector<Cx>(dim, 0.0));
  for (size_t s = 0; s < dim; s++) {
    size_t t = s;
    int sign = 1;
    for (size_t q = 0; q < n; q++) {
      if (x.get(q)) t ^= size_t(1) << q;
      if (z.get(q) && ((s >> q) & 1)) sign = -sign;
    }
    m[t][s] = phase * double(sign);
  }
  return m;
}

// Rank-one density matrix of the sign-free tableau state: the product of the
// generator projectors (I + g_i)/2. Entropies are independent of the
// untracked signs, so any sign assignment serves as the oracle state.
Dense dense_state(const Tableau &t) {
  size_t n = t.n();
  size_t dim = size_t(1) << n;
  Dense rho = dense_identity(dim);
  for (size_t i = 0; i < n; i++) {
    BitVector x(n), z(n);
    for (size_t q = 0; q < n; q++) {
      x.set(q, t.x_bit(i, q));
      z.set(q, t.z_bit(i, q));
    }
    Dense g = dense_pauli(n, x, z);
    Dense next(dim, std::vector<Cx>(dim, 0.0));
    for (size_t a = 0; a < dim; a++) {
      for (size_t b = 0; b < dim; b++) {
        Cx acc = rho[a][b];
        for (size_t k = 0; k < dim; k++) acc += rho[a][k] * g[k][b];
        next[a][b] = 0.5 * acc;
      }
    }
    rho = next;
  }
  return rho;
}

// Renyi-2 entropy in bits of the qubits in `mask` from the dense state.
double dense_entropy(const Dense &rho, size_t n, size_t mask) {
  size_t bits_a = size_t(std::popcount((unsigned long long)mask));
  size_t dim_a = size_t(1) << bits_a;
  size_t dim_b = size_t(1) << (n - bits_a);
  std::vector<size_t> abit, bbit;
  for (size_t q = 0; q < n; q++) {
    if ((mask >> q) & 1) abit.push_back(q); else bbit.push_back(q);
  }
  auto compose = [&](size_t a, size_t b) {
    size_t s = 0;
    for (size_t i = 0; i < abit.size(); i++) s |= ((a >> i) & 1) << abit[i];
    for (size_t i = 0; i < bbit.size(); i++) s |= ((b >> i) & 1) << bbit[i];
    return s;
  };
  Dense ra(dim_a, std::vector<Cx>(dim_a, 0.0));
  for (size_t a1 = 0; a1 < dim_a; a1++) {
    for (size_t a2 = 0; a2 < dim_a; a2++) {
      for (size_t b = 0; b < dim_b; b++) {
        ra[a1][a2] += rho[compose(a1, b)][compose(a2, b)];
      }
    }
  }
  double purity = 0.0;
  for (size_t i = 0; i < dim_a; i++) {
    for (size_t j = 0; j < dim_a; j++) {
      purity += std::real(ra[i][j] * ra[j][i]);
    }
  }
  return -std::log2(purity);
}

size_t dense_support_count(const Dense &rho) {
  size_t c = 0;
  for (size_t i = 0; i < rho.size(); i++) {
    if (std::real(rho[i][i]) > 1e-9) c++;
  }
  return c;
}

Dense hadamard_all(size_t n) {
  size_t dim = size_t(1) << n;
  double norm = 1.0 / std::sqrt(double(dim));
  Dense h(dim, std::vector<Cx>(dim, 0.0));
  for (size_t s = 0; s < dim; s++) {
    for (size_t t = 0; t < dim; t++) {
      h[s][t] = norm * (std::popcount((unsigned long long)(s & t)) % 2 ? -1.0 : 1.0);
    }
  }
  return h;
}

}  // namespace

TEST_CASE("product states have single-site generators") {
  Tableau z4 = Tableau::product_state(std::vector<PauliAxis>(4, PauliAxis::kZ));
  for (size_t q = 0; q < 4; q++) {
    CHECK(group_contains(z4, make_pauli(4, {}, {q})));
  }
  Tableau x2 = Tableau::product_state({PauliAxis::kX, PauliAxis::kX});
  CHECK(group_contains(x2, make_pauli(2, {0}, {})));
  CHECK(group_contains(x2, make_pauli(2, {1}, {})));
  Tableau st = Tableau::product_state(
      {PauliAxis::kZ, PauliAxis::kX, PauliAxis::kZ, PauliAxis::kX});
  CHECK(group_contains(st, make_pauli(4, {}, {0})));
  CHECK(group_contains(st, make_pauli(4, {1}, {})));
  CHECK(group_contains(st, make_pauli(4, {}, {2})));
  CHECK(group_contains(st, make_pauli(4, {3}, {})));
}

TEST_CASE("cnot conjugation") {
  Tableau t = Tableau::product_state({PauliAxis::kX, PauliAxis::kZ});
  t.apply_cnot(0, 1);
  CHECK(group_contains(t, make_pauli(2, {0, 1}, {})));
  CHECK(group_contains(t, make_pauli(2, {}, {0, 1})));
  CHECK(t.entanglement_entropy(ColumnSet({0})) == 1);

  Tableau zz = Tableau::product_state({PauliAxis::kZ, PauliAxis::kZ});
  BitMatrix before = zz.generators();
  zz.apply_cnot(0, 1);
  CHECK(zz.generators() == before);

  Tableau xx = Tableau::product_state({PauliAxis::kX, PauliAxis::kX});
  xx.apply_cnot(1, 0);
  CHECK(group_contains(xx, make_pauli(2, {0, 1}, {})));
  CHECK(group_contains(xx, make_pauli(2, {0}, {})));
  CHECK(xx.entanglement_entropy(ColumnSet({0})) == 0);
}

TEST_CASE("swap and cz conjugation") {
  Tableau t = Tableau::product_state({PauliAxis::kX, PauliAxis::kZ});
  t.apply_swap(0, 1);
  CHECK(group_contains(t, make_pauli(2, {1}, {})));
  CHECK(group_contains(t, make_pauli(2, {}, {0})));
  t.apply_swap(0, 1);
  CHECK(group_contains(t, make_pauli(2, {0}, {})));
  CHECK(group_contains(t, make_pauli(2, {}, {1})));

  Tableau c = Tableau::product_state({PauliAxis::kX, PauliAxis::kZ});
  c.apply_cz(0, 1);
  CHECK(group_contains(c, make_pauli(2, {0}, {1})));
  CHECK(group_contains(c, make_pauli(2, {}, {1})));
  c.apply_cz(0, 1);
  CHECK(group_contains(c, make_pauli(2, {0}, {})));

  Tableau zz = Tableau::product_state({PauliAxis::kZ, PauliAxis::kZ});
  BitMatrix before = zz.generators();
  zz.apply_cz(0, 1);
  CHECK(zz.generators() == before);
}

TEST_CASE("self-target gates are rejected") {
  Tableau t = Tableau::product_state({PauliAxis::kZ, PauliAxis::kZ});
  CHECK_THROWS(t.apply_cnot(1, 1));
  CHECK_THROWS(t.apply_swap(0, 0));
  CHECK_THROWS(t.apply_cz(1, 1));
}

TEST_CASE("measurement update") {
  Tableau z = Tableau::product_state({PauliAxis::kZ});
  CHECK_FALSE(z.measure_z(0));
  CHECK(group_contains(z, make_pauli(1, {}, {0})));

  Tableau x = Tableau::product_state({PauliAxis::kX});
  CHECK(x.measure_z(0));
  CHECK(group_contains(x, make_pauli(1, {}, {0})));
  CHECK_FALSE(group_contains(x, make_pauli(1, {0}, {})));

  // Bell pair; measuring X on one qubit destroys the entanglement.
  Tableau bell = Tableau::product_state({PauliAxis::kX, PauliAxis::kZ});
  bell.apply_cnot(0, 1);
  CHECK(bell.entanglement_entropy(ColumnSet({0})) == 1);
  CHECK(bell.measure_x(0));
  CHECK(group_contains(bell, make_pauli(2, {0}, {})));
  CHECK(group_contains(bell, make_pauli(2, {0, 1}, {})));
  CHECK(bell.entanglement_entropy(ColumnSet({0})) == 0);
}

TEST_CASE("entanglement entropy examples") {
  Tableau bell = Tableau::product_state({PauliAxis::kX, PauliAxis::kZ});
  bell.apply_cnot(0, 1);
  CHECK(bell.entanglement_entropy(ColumnSet({0})) == 1);
  CHECK(bell.entanglement_entropy(ColumnSet({1})) == 1);
  CHECK(bell.entanglement_entropy(ColumnSet()) == 0);
  CHECK(bell.entanglement_entropy(ColumnSet::range(0, 2)) == 0);

  Tableau prod = Tableau::product_state(
      {PauliAxis::kX, PauliAxis::kZ, PauliAxis::kX});
  CHECK(prod.entanglement_entropy(ColumnSet({0, 2})) == 0);

  Tableau ghz = Tableau::product_state(
      {PauliAxis::kX, PauliAxis::kZ, PauliAxis::kZ});
  ghz.apply_cnot(0, 1);
  ghz.apply_cnot(0, 2);
  CHECK(group_contains(ghz, make_pauli(3, {0, 1, 2}, {})));
  CHECK(ghz.entanglement_entropy(ColumnSet({0, 1})) == 1);
  CHECK(ghz.entanglement_entropy(ColumnSet({0})) == 1);
}

TEST_CASE("participation entropy and sector counts") {
  Tableau z4 = Tableau::product_state(std::vector<PauliAxis>(4, PauliAxis::kZ));
  CHECK(z4.participation_entropy_z() == 0);
  CHECK(z4.participation_entropy_x() == 4);
  auto sc = z4.sector_counts();
  REQUIRE(sc.has_value());
  CHECK(sc->n_x == 0);
  CHECK(sc->n_z == 4);

  Tableau x4 = Tableau::product_state(std::vector<PauliAxis>(4, PauliAxis::kX));
  CHECK(x4.participation_entropy_z() == 4);

  Tableau bell = Tableau::product_state({PauliAxis::kX, PauliAxis::kZ});
  bell.apply_cnot(0, 1);
  CHECK(bell.participation_entropy_z() == 1);
  auto sb = bell.sector_counts();
  REQUIRE(sb.has_value());
  CHECK(sb->n_x == 1);
  CHECK(sb->n_z == 1);

  // CZ on |++> leaves no pure-X or pure-Z member except identity.
  Tableau czs = Tableau::product_state({PauliAxis::kX, PauliAxis::kX});
  czs.apply_cz(0, 1);
  CHECK_FALSE(czs.sector_counts().has_value());
}

TEST_CASE("z string membership") {
  Tableau z3 = Tableau::product_state(std::vector<PauliAxis>(3, PauliAxis::kZ));
  BitVector v(3);
  v.set(0, true);
  v.set(2, true);
  CHECK(z3.contains_z_string(v));
  Tableau x3 = Tableau::product_state(std::vector<PauliAxis>(3, PauliAxis::kX));
  CHECK_FALSE(x3.contains_z_string(v));
  BitVector zero(3);
  CHECK(x3.contains_z_string(zero));
}

TEST_CASE("random circuits agree with the dense oracle") {
  auto rng = make_rng(77);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (size_t n = 2; n <= 5; n++) {
    for (int inst = 0; inst < 12; inst++) {
      std::vector<PauliAxis> axes(n);
      for (auto &a : axes) a = u(rng) < 0.5 ? PauliAxis::kX : PauliAxis::kZ;
      Tableau t = Tableau::product_state(axes);
      std::uniform_int_distribution<size_t> pick(0, n - 1);
      for (int op = 0; op < 25; op++) {
        size_t q1 = pick(rng), q2 = pick(rng);
        switch (std::uniform_int_distribution<int>(0, 4)(rng)) {
          case 0: if (q1 != q2) t.apply_cnot(q1, q2); break;
          case 1: if (q1 != q2) t.apply_swap(q1, q2); break;
          case 2: if (q1 != q2) t.apply_cz(q1, q2); break;
          case 3: t.measure_x(q1); break;
          default: t.measure_z(q1); break;
        }
        REQUIRE(t.full_rank());
        REQUIRE(generators_commute(t));
      }
      Dense rho = dense_state(t);
      double trace = 0.0;
      for (size_t i = 0; i < rho.size(); i++) trace += std::real(rho[i][i]);
      REQUIRE(trace == doctest::Approx(1.0).epsilon(1e-9));

      size_t mask = std::uniform_int_distribution<size_t>(
          0, (size_t(1) << n) - 1)(rng);
      std::vector<size_t> region;
      for (size_t q = 0; q < n; q++) {
        if ((mask >> q) & 1) region.push_back(q);
      }
      double s_dense = dense_entropy(rho, n, mask);
      CHECK(double(t.entanglement_entropy(ColumnSet(region))) ==
            doctest::Approx(s_dense).epsilon(1e-7));

      size_t support_z = dense_support_count(rho);
      CHECK((size_t(1) << t.participation_entropy_z()) == support_z);
      Dense h = hadamard_all(n);
      Dense rho_x = dense_mul(dense_mul(h, rho), h);
      size_t support_x = dense_support_count(rho_x);
      CHECK((size_t(1) << t.participation_entropy_x()) == support_x);

      auto sc = t.sector_counts();
      if (sc) {
        CHECK(sc->n_x + sc->n_z == n);
        CHECK(t.participation_entropy_z() == sc->n_x);
        CHECK(t.participation_entropy_x() == sc->n_z);
      }
    }
  }
}

TEST_CASE("pure state entropies are complementary") {
  auto rng = make_rng(88);
  size_t n = 8;
  Tableau t = Tableau::product_state(std::vector<PauliAxis>(n, PauliAxis::kZ));
  std::uniform_int_distribution<size_t> pick(0, n - 1);
  for (int op = 0; op < 60; op++) {
    size_t q1 = pick(rng), q2 = pick(rng);
    if (q1 == q2) continue;
    if (op % 3 == 0) t.measure_x(q1);
    t.apply_cnot(q1, q2);
  }
  for (size_t cut = 0; cut <= n; cut++) {
    ColumnSet a = ColumnSet::range(0, cut);
    ColumnSet b = ColumnSet::range(cut, n);
    CHECK(t.entanglement_entropy(a) == t.entanglement_entropy(b));
  }
}

TEST_CASE("split tableau matches the reference on sector-pure circuits") {
  auto rng = make_rng(99);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int inst = 0; inst < 15; inst++) {
    size_t cells = 2 + inst % 4;
    size_t n = 2 * cells;
    std::vector<PauliAxis> axes(n);
    for (auto &a : axes) a = u(rng) < 0.5 ? PauliAxis::kX : PauliAxis::kZ;
    Tableau ref = Tableau::product_state(axes);
    SplitTableau split = SplitTableau::product_state(axes);
    std::uniform_int_distribution<size_t> pick(0, n - 1);
    for (int op = 0; op < 40; op++) {
      size_t q1 = pick(rng), q2 = pick(rng);
      switch (std::uniform_int_distribution<int>(0, 3)(rng)) {
        case 0:
          if (q1 != q2) { ref.apply_cnot(q1, q2); split.apply_cnot(q1, q2); }
          break;
        case 1:
          if (q1 != q2) { ref.apply_swap(q1, q2); split.apply_swap(q1, q2); }
          break;
        case 2: {
          bool a = ref.measure_x(q1);
          bool b = split.measure_x(q1);
          CHECK(a == b);
          break;
        }
        default: {
          bool a = ref.measure_z(q1);
          bool b = split.measure_z(q1);
          CHECK(a == b);
          break;
        }
      }
    }
    for (size_t c0 = 0; c0 < cells; c0++) {
      CHECK(ref.entanglement_entropy_cells(0, c0) ==
            split.entanglement_entropy_cells(0, c0));
    }
    CHECK(ref.participation_entropy_z() == split.participation_entropy_z());
    CHECK(ref.participation_entropy_x() == split.participation_entropy_x());
    auto sc = ref.sector_counts();
    REQUIRE(sc.has_value());
    CHECK(sc->n_x == split.n_x());
    CHECK(sc->n_z == split.n_z());
    // Same stabilizer group: stacking both generator sets adds no rank.
    Tableau back = split.to_tableau();
    CHECK(rank_of(vstack(ref.generators(), back.generators())) == n);
  }
}

TEST_CASE("entropy bounded by sector counts") {
  auto rng = make_rng(111);
  size_t cells = 5, n = 2 * cells;
  std::vector<PauliAxis> axes(n, PauliAxis::kX);
  Tableau t = Tableau::product_state(axes);
  std::uniform_int_distribution<size_t> pick(0, n - 1);
  for (int op = 0; op < 80; op++) {
    size_t q1 = pick(rng), q2 = pick(rng);
    if (q1 != q2) t.apply_cnot(q1, q2);
    if (op % 4 == 0) t.measure_z(pick(rng));
    if (op % 7 == 0) t.measure_x(pick(rng));
    auto sc = t.sector_counts();
    REQUIRE(sc.has_value());
    size_t bound = std::min(sc->n_x, sc->n_z);
    for (size_t cut = 1; cut < cells; cut++) {
      CHECK(t.entanglement_entropy_cells(0, cut) <= bound);
    }
  }
}

TEST_CASE("full_rank detects dependent generators") {
  BitMatrix g(2, 4);
  g.set(0, 2, true);
  g.set(1, 2, true);
  Tableau t = Tableau::from_generators(g);
  CHECK_FALSE(t.full_rank());
  CHECK_THROWS(Tableau::from_generators(BitMatrix(2, 3)));
}
