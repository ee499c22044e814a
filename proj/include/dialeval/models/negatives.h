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

#ifndef DIALEVAL_MODELS_NEGATIVES_H_
#define DIALEVAL_MODELS_NEGATIVES_H_

#include <memory>
#include <vector>

#include "dialeval/models/encoding.h"
#include "dialeval/random.h"

namespace dialeval {

// Uniform negative candidates for one training example. Entity examples
// draw from the entity list minus the gold set; response examples draw
// from the training responses minus the gold text. May return fewer than
// n when the source is small.
std::vector<const BagOfTokens*> SampleNegatives(
    const EncodedExample& ex, const CandidateSet& responses, int n, Rng& rng);

}  // namespace dialeval

#endif  // DIALEVAL_MODELS_NEGATIVES_H_
