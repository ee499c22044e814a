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

#ifndef DIALEVAL_TASKGEN_GENERATORS_H_
#define DIALEVAL_TASKGEN_GENERATORS_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "dialeval/ingest/sources.h"
#include "dialeval/kb/knowledge_base.h"
#include "dialeval/taskgen/example.h"
#include "dialeval/taskgen/templates.h"

namespace dialeval {

enum class Split : uint8_t { kTrain, kDev, kTest };
std::string_view SplitName(Split s);

// Dialog ids are unique across tasks and splits: each (task, split) pair
// owns a disjoint block.
int64_t DialogIdBase(TaskTag task, Split split);

struct SplitSet {
  std::vector<Example> train;
  std::vector<Example> dev;
  std::vector<Example> test;
  std::vector<std::string> warnings;

  std::vector<Example>& at(Split s);
  const std::vector<Example>& at(Split s) const;
};

// Factoid questions over the eleven classes. (template, entity) pairs are
// partitioned across splits before sampling, so splits never share a pair.
// A class without templates or KB support is skipped with a warning.
SplitSet GenerateQa(const KnowledgeBase& kb, const TemplateSet& templates,
                    uint64_t seed, int n_train, int n_dev, int n_test);

// Users with at least two five-star movies, shuffled and partitioned. Dev
// and test each receive round(frac * n) users (at least one when there are
// three or more eligible users).
struct UserSplit {
  std::vector<UserId> train;
  std::vector<UserId> dev;
  std::vector<UserId> test;
  const std::vector<UserId>& at(Split s) const;
};
UserSplit PartitionUsers(const Ratings& ratings, uint64_t seed,
                         double dev_frac = 0.1, double test_frac = 0.1);

// Recommendation requests: a user is drawn with replacement, 1..8 of their
// five-star movies are listed in a random statement template and the gold is
// drawn uniformly from their remaining five-star movies.
std::vector<Example> GenerateRecs(const Ratings& ratings,
                                  const KnowledgeBase& kb,
                                  const TemplateSet& templates, uint64_t seed,
                                  int n_examples, std::span<const UserId> users,
                                  int64_t first_dialog_id = 0);

struct QaRecsResult {
  std::vector<Example> examples;  // three per dialog, positions 1..3
  int skipped_dialogs = 0;
};

// Three-exchange dialogs: a constrained recommendation, an anaphoric
// factoid question about it, and a request for an alternative sharing the
// constraint plus a stated preference.
QaRecsResult GenerateQaRecs(const KnowledgeBase& kb, const Ratings& ratings,
                            const TemplateSet& templates, uint64_t seed,
                            int n_dialogs, std::span<const UserId> users,
                            int64_t first_dialog_id = 0);

inline constexpr int kMaxDialogRetries = 20;

struct PoolSizes {
  int dev = 1000;
  int test = 1000;
};

struct DiscussionSplits {
  SplitSet sets;
  std::shared_ptr<const std::vector<std::string>> dev_pool;
  std::shared_ptr<const std::vector<std::string>> test_pool;
};

// One example per exchange with the full prior context. Dev/test examples
// rank the gold against their split's pool; training examples carry the
// gold only. Throws DataError if a pool contains a gold response.
DiscussionSplits GenerateDiscussion(const ThreadCorpus& threads,
                                    PoolSizes pool_sizes, uint64_t seed,
                                    double dev_frac = 0.1,
                                    double test_frac = 0.1);

// Mixture of task sets. Each draw picks a component by `proportions`, then
// takes that component's next example from a seeded permutation (reshuffled
// when exhausted). n_total == 0 means the sum of the component sizes.
std::vector<Example> GenerateJoint(
    std::span<const std::vector<Example>> task_sets,
    std::span<const double> proportions, uint64_t seed, size_t n_total = 0);

}  // namespace dialeval

#endif  // DIALEVAL_TASKGEN_GENERATORS_H_
