// Copyright 2026 The Dialeval Authors.
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

#ifndef DIALEVAL_RANDOM_H_
#define DIALEVAL_RANDOM_H_

#include <cstdint>
#include <random>
#include <vector>

namespace dialeval {

using Rng = std::mt19937_64;

// SplitMix64 finalizer; gives independent-looking streams from one seed.
inline uint64_t DeriveSeed(uint64_t seed, uint64_t stream) {
  uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

inline int UniformInt(Rng& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

template <typename T>
void Shuffle(std::vector<T>* v, Rng& rng) {
  // Explicit Fisher-Yates so the permutation does not depend on the
  // standard library's std::shuffle implementation.
  for (size_t i = v->size(); i > 1; --i) {
    const size_t j = std::uniform_int_distribution<size_t>(0, i - 1)(rng);
    std::swap((*v)[i - 1], (*v)[j]);
  }
}

}  // namespace dialeval

#endif  // DIALEVAL_RANDOM_H_
