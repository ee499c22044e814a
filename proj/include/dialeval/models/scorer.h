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

#ifndef DIALEVAL_MODELS_SCORER_H_
#define DIALEVAL_MODELS_SCORER_H_

#include <vector>

#include "dialeval/models/encoding.h"

namespace dialeval {

// Read-only candidate scoring; implementations must be safe to call
// concurrently.
class Scorer {
 public:
  virtual ~Scorer() = default;
  // One score per candidate of `ex`, higher is better.
  virtual std::vector<double> Score(const EncodedExample& ex) const = 0;
};

}  // namespace dialeval

#endif  // DIALEVAL_MODELS_SCORER_H_
