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

#include "dialeval/taskgen/generators.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <memory>
#include <numeric>
#include <set>
#include <unordered_set>

#include "dialeval/errors.h"
#include "dialeval/random.h"

namespace dialeval {

namespace {

std::vector<std::string> Names(const KnowledgeBase& kb,
                               const std::vector<EntityId>& ids) {
  std::vector<std::string> out;
  out.reserve(ids.size());
  for (EntityId id : ids) out.push_back(kb.EntityName(id));
  return out;
}

// Objects of `rel` anywhere in the KB, sorted by id.
std::vector<EntityId> ObjectsOf(const KnowledgeBase& kb, Relation rel) {
  std::set<EntityId> out;
  for (const Triple& t : kb.triples()) {
    if (t.relation == rel) out.insert(t.object);
  }
  return {out.begin(), out.end()};
}

std::vector<UserId> EligibleUsers(const Ratings& ratings,
                                  std::span<const UserId> users) {
  std::vector<UserId> out;
  for (UserId u : users) {
    if (ratings.FiveStar(u).size() >= 2) out.push_back(u);
  }
  return out;
}

bool Contains(const std::vector<EntityId>& sorted, EntityId id) {
  return std::binary_search(sorted.begin(), sorted.end(), id);
}

}  // namespace

std::string_view SplitName(Split s) {
  switch (s) {
    case Split::kTrain:
      return "train";
    case Split::kDev:
      return "dev";
    case Split::kTest:
      return "test";
  }
  return "train";
}

int64_t DialogIdBase(TaskTag task, Split split) {
  return (static_cast<int64_t>(task) + 1) * 1'000'000'000LL +
         static_cast<int64_t>(split) * 100'000'000LL;
}

std::vector<Example>& SplitSet::at(Split s) {
  return s == Split::kTrain ? train : (s == Split::kDev ? dev : test);
}

const std::vector<Example>& SplitSet::at(Split s) const {
  return s == Split::kTrain ? train : (s == Split::kDev ? dev : test);
}

const std::vector<UserId>& UserSplit::at(Split s) const {
  return s == Split::kTrain ? train : (s == Split::kDev ? dev : test);
}

SplitSet GenerateQa(const KnowledgeBase& kb, const TemplateSet& templates,
                    uint64_t seed, int n_train, int n_dev, int n_test) {
  struct Pair {
    QuestionClass cls;
    size_t pattern;
    EntityId pivot;
  };
  SplitSet out;
  std::vector<Pair> pairs;
  for (int c = 0; c < kNumQuestionClasses; ++c) {
    const auto cls = static_cast<QuestionClass>(c);
    const std::string name(QuestionClassName(cls));
    const auto edge = EdgeOf(cls);
    if (!edge) {
      out.warnings.push_back("class " + name + " has no KB relation; skipped");
      continue;
    }
    if (!templates.Has(name)) {
      out.warnings.push_back("class " + name + " has no templates; skipped");
      continue;
    }
    std::vector<EntityId> pivots =
        edge->inverse ? ObjectsOf(kb, edge->relation) : kb.Movies();
    const size_t before = pairs.size();
    for (EntityId pivot : pivots) {
      const bool supported = edge->inverse
                                 ? !kb.QuerySubjects(edge->relation, pivot).empty()
                                 : !kb.QueryObjects(pivot, edge->relation).empty();
      if (!supported) continue;
      for (size_t p = 0; p < templates.Patterns(name).size(); ++p) {
        pairs.push_back({cls, p, pivot});
      }
    }
    if (pairs.size() == before) {
      out.warnings.push_back("class " + name + " has no KB support; skipped");
    }
  }

  Rng rng(DeriveSeed(seed, 11));
  Shuffle(&pairs, rng);

  // Partition pairs proportionally to the requested split sizes.
  const std::array<int, 3> requested = {n_train, n_dev, n_test};
  const int total = std::max(1, n_train + n_dev + n_test);
  std::array<size_t, 3> share{};
  size_t assigned = 0;
  for (int s = 1; s < 3; ++s) {
    share[s] = static_cast<size_t>(std::llround(
        static_cast<double>(pairs.size()) * requested[s] / total));
    if (requested[s] > 0 && share[s] == 0 && pairs.size() >= 3) share[s] = 1;
    assigned += share[s];
  }
  share[0] = pairs.size() > assigned ? pairs.size() - assigned : 0;

  size_t offset = 0;
  for (int s : {1, 2, 0}) {
    const auto split = static_cast<Split>(s);
    std::vector<Pair> mine(pairs.begin() + std::min(offset, pairs.size()),
                           pairs.begin() + std::min(offset + share[s], pairs.size()));
    offset += share[s];
    auto& examples = out.at(split);
    if (mine.empty()) {
      if (requested[s] > 0) {
        out.warnings.push_back("no question pairs left for split " +
                               std::string(SplitName(split)));
      }
      continue;
    }
    const int64_t base = DialogIdBase(TaskTag::kQa, split);
    std::vector<size_t> order(mine.size());
    size_t cursor = order.size();
    for (int i = 0; i < requested[s]; ++i) {
      if (cursor == order.size()) {
        std::iota(order.begin(), order.end(), 0);
        Shuffle(&order, rng);
        cursor = 0;
      }
      const Pair& pair = mine[order[cursor++]];
      const auto edge = *EdgeOf(pair.cls);
      const std::string section(QuestionClassName(pair.cls));
      std::vector<EntityId> answers =
          edge.inverse ? kb.QuerySubjects(edge.relation, pair.pivot)
                       : kb.QueryObjects(pair.pivot, edge.relation);
      Example ex;
      ex.input = TemplateSet::Realize(templates.Patterns(section)[pair.pattern],
                                      kb.EntityName(pair.pivot));
      ex.gold = Names(kb, answers);
      ex.task = TaskTag::kQa;
      ex.question_class = pair.cls;
      ex.response_position = 1;
      ex.dialog_id = base + i;
      examples.push_back(std::move(ex));
    }
  }
  return out;
}

UserSplit PartitionUsers(const Ratings& ratings, uint64_t seed,
                         double dev_frac, double test_frac) {
  std::vector<UserId> all(ratings.num_users());
  std::iota(all.begin(), all.end(), 0);
  std::vector<UserId> eligible = EligibleUsers(ratings, all);
  Rng rng(DeriveSeed(seed, 21));
  Shuffle(&eligible, rng);
  const size_t n = eligible.size();
  auto count = [n](double frac) {
    size_t c = static_cast<size_t>(std::llround(frac * static_cast<double>(n)));
    if (c == 0 && frac > 0 && n >= 3) c = 1;
    return c;
  };
  const size_t n_dev = count(dev_frac);
  const size_t n_test = std::min(count(test_frac), n - std::min(n, n_dev));
  UserSplit split;
  split.dev.assign(eligible.begin(), eligible.begin() + std::min(n, n_dev));
  split.test.assign(eligible.begin() + split.dev.size(),
                    eligible.begin() + split.dev.size() + n_test);
  split.train.assign(eligible.begin() + split.dev.size() + n_test, eligible.end());
  for (auto* v : {&split.train, &split.dev, &split.test}) {
    std::sort(v->begin(), v->end());
  }
  return split;
}

std::vector<Example> GenerateRecs(const Ratings& ratings,
                                  const KnowledgeBase& kb,
                                  const TemplateSet& templates, uint64_t seed,
                                  int n_examples, std::span<const UserId> users,
                                  int64_t first_dialog_id) {
  const std::vector<UserId> eligible = EligibleUsers(ratings, users);
  if (eligible.empty()) {
    throw DataError("no user with at least two five-star movies");
  }
  const auto& patterns = templates.Patterns(kRecsStatement);
  if (patterns.empty()) throw DataError("no [recs_statement] templates");

  Rng rng(DeriveSeed(seed, 31));
  std::vector<Example> out;
  out.reserve(n_examples);
  for (int i = 0; i < n_examples; ++i) {
    const UserId user = eligible[UniformInt(rng, 0, eligible.size() - 1)];
    std::vector<EntityId> five = ratings.FiveStar(user);
    const int k = UniformInt(rng, 1, std::min<int>(8, five.size() - 1));
    // Partial Fisher-Yates: the first k become the liked list.
    for (int j = 0; j < k; ++j) {
      const int pick = UniformInt(rng, j, five.size() - 1);
      std::swap(five[j], five[pick]);
    }
    const int gold = UniformInt(rng, k, five.size() - 1);
    std::vector<std::string> liked;
    for (int j = 0; j < k; ++j) liked.push_back(kb.EntityName(five[j]));

    Example ex;
    ex.input = TemplateSet::Realize(patterns[UniformInt(rng, 0, patterns.size() - 1)],
                                    FormatList(liked));
    ex.gold = {kb.EntityName(five[gold])};
    ex.task = TaskTag::kRecs;
    ex.dialog_id = first_dialog_id + i;
    out.push_back(std::move(ex));
  }
  return out;
}

QaRecsResult GenerateQaRecs(const KnowledgeBase& kb, const Ratings& ratings,
                            const TemplateSet& templates, uint64_t seed,
                            int n_dialogs, std::span<const UserId> users,
                            int64_t first_dialog_id) {
  const std::vector<UserId> eligible = EligibleUsers(ratings, users);
  if (eligible.empty()) {
    throw DataError("no user with at least two five-star movies");
  }
  for (std::string_view s : {kRecsStatement, kQaRecsRequest, kFollowupActors,
                             kFollowupDirector, kFollowupTags, kPreferenceActors,
                             kPreferenceDirector, kPreferenceTags}) {
    if (!templates.Has(s)) {
      throw DataError("missing template section [" + std::string(s) + "]");
    }
  }

  struct Followup {
    Relation relation;
    QuestionClass cls;
    std::string_view question;
    std::string_view preference;
  };
  const std::array<Followup, 3> followups = {{
      {Relation::kStarredActors, QuestionClass::kMovieToActors, kFollowupActors,
       kPreferenceActors},
      {Relation::kDirectedBy, QuestionClass::kMovieToDirector, kFollowupDirector,
       kPreferenceDirector},
      {Relation::kHasTags, QuestionClass::kMovieToTags, kFollowupTags,
       kPreferenceTags},
  }};

  Rng rng(DeriveSeed(seed, 41));
  auto pick = [&rng](const auto& v) -> const auto& {
    return v[UniformInt(rng, 0, static_cast<int>(v.size()) - 1)];
  };

  QaRecsResult result;
  for (int d = 0; d < n_dialogs; ++d) {
    bool done = false;
    for (int attempt = 0; attempt < kMaxDialogRetries && !done; ++attempt) {
      const UserId user = pick(eligible);
      std::vector<EntityId> five = ratings.FiveStar(user);

      // Exchange 1: constrained recommendation.
      const EntityId gold1 = pick(five);
      std::vector<EntityId> topics = kb.QueryObjects(gold1, Relation::kHasGenre);
      const auto tags = kb.QueryObjects(gold1, Relation::kHasTags);
      topics.insert(topics.end(), tags.begin(), tags.end());
      if (topics.empty()) continue;
      const EntityId topic = pick(topics);

      std::vector<EntityId> rest;
      for (EntityId m : five) {
        if (m != gold1) rest.push_back(m);
      }
      const int k = UniformInt(rng, 1, std::min<int>(8, rest.size()));
      for (int j = 0; j < k; ++j) {
        std::swap(rest[j], rest[UniformInt(rng, j, rest.size() - 1)]);
      }
      std::vector<EntityId> liked(rest.begin(), rest.begin() + k);
      std::vector<std::string> liked_names = Names(kb, liked);
      std::sort(liked.begin(), liked.end());

      // Exchange 2: factoid question about the suggestion.
      const Followup& f = followups[UniformInt(rng, 0, 2)];
      const std::vector<EntityId> gold2 = kb.QueryObjects(gold1, f.relation);
      if (gold2.empty()) continue;

      // Exchange 3: alternative sharing the topic, with a stated preference
      // of the same property type.
      std::vector<EntityId> same_topic = kb.QuerySubjects(Relation::kHasGenre, topic);
      const auto tagged = kb.QuerySubjects(Relation::kHasTags, topic);
      same_topic.insert(same_topic.end(), tagged.begin(), tagged.end());
      std::sort(same_topic.begin(), same_topic.end());
      same_topic.erase(std::unique(same_topic.begin(), same_topic.end()),
                       same_topic.end());
      std::vector<std::pair<EntityId, EntityId>> options;  // (movie, property)
      std::vector<std::pair<EntityId, EntityId>> preferred;
      for (EntityId m : same_topic) {
        if (m == gold1 || Contains(liked, m)) continue;
        for (EntityId prop : kb.QueryObjects(m, f.relation)) {
          if (Contains(gold2, prop)) continue;
          options.emplace_back(m, prop);
          if (Contains(five, m)) preferred.emplace_back(m, prop);
        }
      }
      if (options.empty()) continue;
      const auto [target, property] = preferred.empty() ? pick(options) : pick(preferred);
      (void)target;
      std::vector<EntityId> gold3;
      for (EntityId m : same_topic) {
        if (m == gold1 || Contains(liked, m)) continue;
        if (Contains(kb.QueryObjects(m, f.relation), property)) gold3.push_back(m);
      }

      const int64_t dialog_id = first_dialog_id + d;
      Example ex1;
      ex1.input = TemplateSet::Realize(pick(templates.Patterns(kRecsStatement)),
                                       FormatList(liked_names)) +
                  " " +
                  TemplateSet::Realize(pick(templates.Patterns(kQaRecsRequest)),
                                       kb.EntityName(topic));
      ex1.gold = {kb.EntityName(gold1)};
      ex1.task = TaskTag::kQaRecs;
      ex1.response_position = 1;
      ex1.dialog_id = dialog_id;

      Example ex2;
      ex2.context = {{ex1.input, JoinAnswers(ex1.gold)}};
      ex2.input = pick(templates.Patterns(f.question));
      ex2.gold = Names(kb, gold2);
      ex2.task = TaskTag::kQaRecs;
      ex2.question_class = f.cls;
      ex2.response_position = 2;
      ex2.dialog_id = dialog_id;

      Example ex3;
      ex3.context = ex2.context;
      ex3.context.push_back({ex2.input, JoinAnswers(ex2.gold)});
      ex3.input = TemplateSet::Realize(pick(templates.Patterns(f.preference)),
                                       kb.EntityName(property));
      ex3.gold = Names(kb, gold3);
      ex3.task = TaskTag::kQaRecs;
      ex3.response_position = 3;
      ex3.dialog_id = dialog_id;

      result.examples.push_back(std::move(ex1));
      result.examples.push_back(std::move(ex2));
      result.examples.push_back(std::move(ex3));
      done = true;
    }
    if (!done) ++result.skipped_dialogs;
  }
  return result;
}

DiscussionSplits GenerateDiscussion(const ThreadCorpus& threads,
                                    PoolSizes pool_sizes, uint64_t seed,
                                    double dev_frac, double test_frac) {
  std::unordered_set<std::string> responses;
  for (const ThreadDialog& d : threads.dialogs) {
    for (const Exchange& e : d.exchanges) responses.insert(e.reply);
  }
  for (const std::string& c : threads.candidate_pool) {
    if (responses.contains(c)) {
      throw DataError("candidate pool contains a gold response: '" + c + "'");
    }
  }

  Rng rng(DeriveSeed(seed, 51));
  DiscussionSplits out;

  std::vector<std::string> pool = threads.candidate_pool;
  Shuffle(&pool, rng);
  const size_t want_dev = std::max(0, pool_sizes.dev);
  const size_t want_test = std::max(0, pool_sizes.test);
  size_t n_dev_pool = want_dev, n_test_pool = want_test;
  if (want_dev + want_test > pool.size()) {
    // Share a short pool in proportion to the requested sizes.
    n_dev_pool = pool.size() * want_dev / (want_dev + want_test);
    n_test_pool = std::min(want_test, pool.size() - n_dev_pool);
  }
  if (n_dev_pool < want_dev || n_test_pool < want_test) {
    out.sets.warnings.push_back("candidate pool too small: dev " +
                                std::to_string(n_dev_pool) + ", test " +
                                std::to_string(n_test_pool));
  }
  out.dev_pool = std::make_shared<const std::vector<std::string>>(
      pool.begin(), pool.begin() + n_dev_pool);
  out.test_pool = std::make_shared<const std::vector<std::string>>(
      pool.begin() + n_dev_pool, pool.begin() + n_dev_pool + n_test_pool);

  std::vector<size_t> order(threads.dialogs.size());
  std::iota(order.begin(), order.end(), 0);
  Shuffle(&order, rng);
  const size_t n = order.size();
  const size_t n_dev = std::min(n, static_cast<size_t>(std::llround(dev_frac * n)));
  const size_t n_test =
      std::min(n - n_dev, static_cast<size_t>(std::llround(test_frac * n)));

  std::array<int64_t, 3> next_id = {DialogIdBase(TaskTag::kDiscussion, Split::kTrain),
                                    DialogIdBase(TaskTag::kDiscussion, Split::kDev),
                                    DialogIdBase(TaskTag::kDiscussion, Split::kTest)};
  int skipped = 0;
  for (size_t i = 0; i < n; ++i) {
    const Split split = i < n_dev ? Split::kDev
                                  : (i < n_dev + n_test ? Split::kTest : Split::kTrain);
    const ThreadDialog& dialog = threads.dialogs[order[i]];
    const bool usable = std::none_of(
        dialog.exchanges.begin(), dialog.exchanges.end(),
        [](const Exchange& e) { return e.reply.empty() || e.post.empty(); });
    if (!usable) {
      ++skipped;
      continue;
    }
    CandidateSpec spec;
    if (split == Split::kDev) {
      spec = CandidateSpec::Explicit("dev", out.dev_pool);
    } else if (split == Split::kTest) {
      spec = CandidateSpec::Explicit("test", out.test_pool);
    } else {
      spec = CandidateSpec::Explicit("", nullptr);
    }
    const int64_t dialog_id = next_id[static_cast<size_t>(split)]++;
    std::vector<Turn> context;
    for (size_t e = 0; e < dialog.exchanges.size(); ++e) {
      Example ex;
      ex.context = context;
      ex.input = dialog.exchanges[e].post;
      ex.gold = {dialog.exchanges[e].reply};
      ex.candidates = spec;
      ex.task = TaskTag::kDiscussion;
      ex.response_position = static_cast<int>(e) + 1;
      ex.dialog_id = dialog_id;
      out.sets.at(split).push_back(std::move(ex));
      context.push_back({dialog.exchanges[e].post, dialog.exchanges[e].reply});
    }
  }
  if (skipped > 0) {
    out.sets.warnings.push_back(std::to_string(skipped) +
                                " dialogs with empty utterances skipped");
  }
  return out;
}

std::vector<Example> GenerateJoint(std::span<const std::vector<Example>> task_sets,
                                   std::span<const double> proportions,
                                   uint64_t seed, size_t n_total) {
  if (task_sets.size() != proportions.size()) {
    throw UsageError("one mixture proportion per task set is required");
  }
  double sum = 0;
  for (size_t i = 0; i < proportions.size(); ++i) {
    if (proportions[i] < 0 || !std::isfinite(proportions[i])) {
      throw UsageError("mixture proportions must be non-negative");
    }
    if (proportions[i] > 0 && task_sets[i].empty()) {
      throw DataError("task set " + std::to_string(i) +
                      " is empty but has a non-zero proportion");
    }
    sum += proportions[i];
  }
  if (std::abs(sum - 1.0) > 1e-6) {
    throw UsageError("mixture proportions must sum to 1");
  }
  if (n_total == 0) {
    for (size_t i = 0; i < task_sets.size(); ++i) {
      if (proportions[i] > 0) n_total += task_sets[i].size();
    }
  }

  Rng rng(DeriveSeed(seed, 61));
  std::discrete_distribution<size_t> component(proportions.begin(), proportions.end());
  std::vector<std::vector<size_t>> orders(task_sets.size());
  std::vector<size_t> cursors(task_sets.size(), 0);
  for (size_t i = 0; i < task_sets.size(); ++i) {
    orders[i].resize(task_sets[i].size());
    cursors[i] = orders[i].size();
  }

  std::vector<Example> out;
  out.reserve(n_total);
  for (size_t n = 0; n < n_total; ++n) {
    const size_t c = component(rng);
    if (cursors[c] == orders[c].size()) {
      std::iota(orders[c].begin(), orders[c].end(), 0);
      Shuffle(&orders[c], rng);
      cursors[c] = 0;
    }
    out.push_back(task_sets[c][orders[c][cursors[c]++]]);
  }
  return out;
}

}  // namespace dialeval
