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

#include "plaq/plaquette.hpp"

#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>

#include "plaq/rng.hpp"

namespace plaq {

DisorderGrid DisorderGrid::random_interior(size_t L, size_t T, double p,
                                           uint64_t seed) {
  if (p < 0.0 || p > 1.0) throw std::invalid_argument("p must be in [0,1]");
  DisorderGrid g(L, T);
  auto rng = make_rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (size_t t = 2; t + 2 <= T; t++) {
    for (size_t x = 0; x < L; x++) {
      if (u(rng) < p) g.set(x, t, 1);
    }
  }
  return g;
}

void DisorderGrid::write(std::ostream &os) const {
  os << L << ' ' << T << '\n';
  for (size_t t = 1; t <= T; t++) {
    for (size_t x = 0; x < L; x++) os << char('0' + at(x, t));
    os << '\n';
  }
}

DisorderGrid DisorderGrid::read(std::istream &is) {
  size_t L = 0, T = 0;
  if (!(is >> L >> T) || L == 0 || T == 0) {
    throw std::runtime_error("bad disorder grid header");
  }
  DisorderGrid g(L, T);
  for (size_t t = 1; t <= T; t++) {
    std::string line;
    if (!(is >> line) || line.size() != L) {
      throw std::runtime_error("bad disorder grid row " + std::to_string(t));
    }
    for (size_t x = 0; x < L; x++) {
      if (line[x] != '1' && line[x] != '5') {
        throw std::runtime_error("disorder grid entries must be 1 or 5");
      }
      g.set(x, t, uint8_t(line[x] - '0'));
    }
  }
  return g;
}

InitialCondition InitialCondition::free_rows(size_t L) {
  InitialCondition ic;
  ic.pin_row1 = BitVector(L);
  ic.pin_row2 = BitVector(L);
  return ic;
}

InitialCondition InitialCondition::fix_row1(size_t L) {
  InitialCondition ic = free_rows(L);
  for (size_t x = 0; x < L; x++) ic.pin_row1.set(x, true);
  return ic;
}

InitialCondition InitialCondition::fix_row2(size_t L) {
  InitialCondition ic = free_rows(L);
  for (size_t x = 0; x < L; x++) ic.pin_row2.set(x, true);
  return ic;
}

InitialCondition InitialCondition::fix_rows12(size_t L) {
  InitialCondition ic = free_rows(L);
  for (size_t x = 0; x < L; x++) {
    ic.pin_row1.set(x, true);
    ic.pin_row2.set(x, true);
  }
  return ic;
}

}  // namespace plaq
