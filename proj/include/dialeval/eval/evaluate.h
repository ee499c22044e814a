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

#ifndef DIALEVAL_EVAL_EVALUATE_H_
#define DIALEVAL_EVAL_EVALUATE_H_

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dialeval/models/encoding.h"
#include "dialeval/models/scorer.h"
#include "dialeval/taskgen/example.h"
#include "dialeval/text/vocabulary.h"

namespace dialeval {

// Candidate ids ordered by score descending, then id ascending.
std::vector<int> RankCandidates(std::span<const double> scores);

// 1 iff any gold id is among the first k ranked ids.
int HitsAtK(std::span<const int> ranked, std::span<const int> gold, int k);

// 1-based position of the best-ranked gold id under the same ordering as
// RankCandidates, computed without sorting.
int BestGoldRank(std::span<const double> scores, std::span<const int> gold);

// Hits@k cutoff used when none is given.
int DefaultK(TaskTag task);

// True when the tokenized input mentions an entity and the gold response
// mentions a different one.
bool EntityMatched(const Example& ex, const Vocabulary& vocab);
std::vector<size_t> EntityMatchSubset(const std::vector<Example>& examples,
                                      const Vocabulary& vocab);

enum class Breakdown { kTask, kType, kPosition, kEntity };
std::optional<Breakdown> ParseBreakdown(std::string_view name);

struct ReportCell {
  std::string partition;
  std::string cell;
  int64_t hits = 0;
  int64_t count = 0;
  double percent() const { return count > 0 ? 100.0 * hits / count : 0.0; }
};

struct EvalReport {
  int k = 0;  // 0: per-task default
  ReportCell overall{"overall", "all"};
  std::vector<ReportCell> by_task;      // one per task
  std::vector<ReportCell> by_type;      // one per question class
  std::vector<ReportCell> by_position;  // response 1, 2, 3+
  ReportCell entity_matched{"entity", "matched"};
  ReportCell entity_unmatched{"entity", "unmatched"};

  EvalReport();
  void Add(const Example& ex, bool matched, bool hit);
  void Merge(const EvalReport& other);

  std::vector<ReportCell> Rows(Breakdown b) const;
  // Aligned table: the overall row followed by the chosen breakdown.
  std::string ToText(std::optional<Breakdown> breakdown) const;
  // Every partition, one "partition\tcell\thits\tcount" row each, hits in
  // percent.
  std::string ToTsv() const;
};

struct ExampleOutcome {
  int rank = 0;
  bool hit = false;
};

// Scores every example, ranks its candidates and aggregates hits@k. k <= 0
// uses DefaultK per example. Runs on `threads` workers (read-only model).
EvalReport Evaluate(const Scorer& scorer, const std::vector<EncodedExample>& encoded,
                    const std::vector<Example>& examples, const Vocabulary& vocab,
                    int k, int threads = 1,
                    std::vector<ExampleOutcome>* outcomes = nullptr);

// Scores the gold candidates +inf and everything else 0.
class OracleScorer : public Scorer {
 public:
  std::vector<double> Score(const EncodedExample& ex) const override;
};

}  // namespace dialeval

#endif  // DIALEVAL_EVAL_EVALUATE_H_
