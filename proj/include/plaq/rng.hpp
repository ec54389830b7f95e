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

#ifndef PLAQ_RNG_HPP
#define PLAQ_RNG_HPP

#include <cstdint>
#include <random>

namespace plaq {

inline uint64_t splitmix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Independent stream seed for ensemble member `index`. Re-running a single
// index reproduces its stream regardless of worker count or batch order.
inline uint64_t member_seed(uint64_t master_seed, uint64_t index) {
  return splitmix64(splitmix64(master_seed) ^ splitmix64(index + 0x51ed2701));
}

inline std::mt19937_64 make_rng(uint64_t seed) {
  return std::mt19937_64(splitmix64(seed));
}

}  // namespace plaq

#endif  // PLAQ_RNG_HPP
