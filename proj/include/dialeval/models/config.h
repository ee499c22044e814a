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

#ifndef DIALEVAL_MODELS_CONFIG_H_
#define DIALEVAL_MODELS_CONFIG_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace dialeval {

enum class ModelKind : uint8_t { kSupEmb = 1, kMemN2N = 2, kIr = 3, kMf = 4 };
std::string_view ModelKindName(ModelKind k);
std::optional<ModelKind> ParseModelKind(std::string_view name);

// Long-term memory retrieval settings shared by encoding and the MemN2N.
struct MemoryConfig {
  bool use_kb = true;
  int hash_n = 0;         // trailing messages hashed, input included; 0 = all
  int hash_cutoff = 500;  // tokens in more facts than this are ignored
  int max_memories = 50;  // cap on long-term items

  // Rows of the time-feature table: slot 0 for KB facts, 1.. for dialog
  // messages counted back from the most recent one (clamped).
  int time_slots() const { return max_memories + 1; }
};

struct TrainConfig {
  ModelKind model = ModelKind::kMemN2N;
  double lambda = 0.005;
  int d = 50;
  int epochs = 20;
  double margin = 0.1;
  int n_neg = 10;
  int w = 1;     // distinct dictionaries: supemb 1..2, memn2n 1..3
  int hops = 1;  // K
  uint64_t seed = 1;
  double init_std = 0.1;
  MemoryConfig memory;
  // TF-IDF
  int ir_variant = 2;        // 1: nearest training message, 2: nearest response
  bool ir_context = true;    // include context turns in the query
  double rf_weight = 0.0;    // relevance feedback weight; 0 disables
  // Matrix factorization
  double mf_reg = 0.01;

  // Throws UsageError on out-of-range values.
  void Validate() const;

  // "key = value" lines; unknown keys are rejected on load.
  std::string ToText() const;
  static TrainConfig FromText(std::string_view text);
  void Save(const std::string& path) const;
  static TrainConfig Load(const std::string& path);
};

}  // namespace dialeval

#endif  // DIALEVAL_MODELS_CONFIG_H_
