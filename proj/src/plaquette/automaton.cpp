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

#include <stdexcept>

#include "plaq/plaquette.hpp"

namespace plaq {

AutomatonResult automaton_evolve(const BitVector &row1, const BitVector &row2,
                                 const DisorderGrid &grid) {
  const size_t L = grid.L, T = grid.T;
  if (L < 2 || T < 3) throw std::invalid_argument("grid needs L >= 2 and T >= 3");
  if (row1.size() != L || row2.size() != L) {
    throw std::invalid_argument("initial rows must have length L");
  }
  AutomatonResult res;
  BitVector b = row1, a = row2;
  for (size_t u = 1; u + 2 <= T; u++) {
    // Measurements of circuit step u act on (b, a) = rows (u, u+1).
    for (size_t x = 0; x < L; x++) {
      if (grid.at(x, u) != 1) continue;
      res.new_dof_sites++;
      if (b.get(x)) {
        res.forced_zero_hits++;
        b.set(x, false);
      }
      if (a.get(x)) {
        res.support_destroyed++;
        a.set(x, false);
      }
    }
    BitVector next(L);
    for (size_t x = 0; x < L; x++) {
      bool v = b.get(x) ^ a.get(x) ^ a.get((x + L - 1) % L) ^ a.get((x + 1) % L);
      next.set(x, v);
    }
    b = a;
    a = next;
  }
  res.row_second_last = b;
  res.row_last = a;
  return res;
}

}  // namespace plaq
