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

#include "dialeval/models/negatives.h"

#include <algorithm>

namespace dialeval {

std::vector<const BagOfTokens*> SampleNegatives(
    const EncodedExample& ex, const CandidateSet& responses, int n, Rng& rng) {
  std::vector<const BagOfTokens*> out;
  if (ex.entity_candidates) {
    const int size = static_cast<int>(ex.candidates->bags.size());
    if (size <= static_cast<int>(ex.gold.size())) return out;
    while (static_cast<int>(out.size()) < n) {
      const int c = UniformInt(rng, 0, size - 1);
      if (std::binary_search(ex.gold.begin(), ex.gold.end(), c)) continue;
      out.push_back(&ex.candidates->bags[c]);
    }
    return out;
  }
  const int size = static_cast<int>(responses.bags.size());
  const bool gold_in_pool = std::find(responses.texts.begin(), responses.texts.end(),
                                      ex.appended_text) != responses.texts.end();
  if (size - (gold_in_pool ? 1 : 0) <= 0) return out;
  while (static_cast<int>(out.size()) < n) {
    const int c = UniformInt(rng, 0, size - 1);
    if (responses.texts[c] == ex.appended_text) continue;
    out.push_back(&responses.bags[c]);
  }
  return out;
}

}  // namespace dialeval
