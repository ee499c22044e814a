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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>

#include "dialeval/errors.h"
#include "dialeval/eval/evaluate.h"
#include "dialeval/models/config.h"
#include "dialeval/models/embedding.h"
#include "dialeval/models/encoding.h"
#include "dialeval/models/memn2n.h"
#include "dialeval/models/mf.h"
#include "dialeval/models/model_io.h"
#include "dialeval/models/negatives.h"
#include "dialeval/models/tfidf.h"
#include "dialeval/random.h"
#include "fd_oracle.h"
#include "test_util.h"

namespace dialeval {
namespace {

BagOfTokens MakeBag(std::initializer_list<std::pair<TokenId, int>> entries) {
  BagOfTokens b;
  for (const auto& [id, n] : entries) b.Add(id, n);
  return b;
}

BagOfTokens RandomBag(Rng& rng, int vocab, int n) {
  BagOfTokens b;
  for (int i = 0; i < n; ++i) b.Add(UniformInt(rng, 0, vocab - 1));
  return b;
}

std::vector<const BagOfTokens*> Ptrs(const std::vector<BagOfTokens>& v) {
  std::vector<const BagOfTokens*> out;
  for (const auto& b : v) out.push_back(&b);
  return out;
}

// ---------------------------------------------------------------- embed_sum

TEST(EmbedSumTest, Examples) {
  Rng rng(1);
  const Matrix m = Matrix::Gaussian(5, 3, 1.0, rng);
  EXPECT_EQ(EmbedSum(BagOfTokens(), m), Vector(3, 0.0));
  const Vector a = EmbedSum(MakeBag({{2, 1}}), m);
  for (int k = 0; k < 3; ++k) EXPECT_EQ(a[k], m(2, k));
  const Vector s = EmbedSum(MakeBag({{2, 2}, {4, 1}}), m);
  for (int k = 0; k < 3; ++k) {
    double oracle = 0;
    for (int rep = 0; rep < 2; ++rep) oracle += m(2, k);
    oracle += m(4, k);
    EXPECT_NEAR(s[k], oracle, 1e-12);
  }
}

// ------------------------------------------------------------ embed_score

TEST(EmbedScoreTest, HandArithmetic) {
  // d = 1 over two ordinary tokens (ids 2 and 3; 0 and 1 are reserved).
  Matrix u_in(4, 1), u_out(4, 1);
  u_in(2, 0) = 1;
  u_in(3, 0) = 2;
  u_out(2, 0) = 3;
  u_out(3, 0) = 4;
  const EmbeddingModel two(u_in, u_out);
  EXPECT_DOUBLE_EQ(two.ScorePair(MakeBag({{2, 1}}), MakeBag({{3, 1}})), 4.0);
  const EmbeddingModel one(u_in, std::nullopt);
  EXPECT_DOUBLE_EQ(one.ScorePair(MakeBag({{2, 1}}), MakeBag({{3, 1}})), 2.0);
}

TEST(EmbedScoreTest, QuadraticFormAndBilinearity) {
  Rng rng(2);
  const EmbeddingModel single(20, 4, true, 0.5, rng);
  const EmbeddingModel two(20, 4, false, 0.5, rng);
  for (int t = 0; t < 50; ++t) {
    const BagOfTokens x = RandomBag(rng, 20, 4);
    const BagOfTokens y = RandomBag(rng, 20, 3);
    EXPECT_GE(single.ScorePair(x, x), 0.0);
    BagOfTokens y3;
    for (const auto& [id, n] : y) y3.Add(id, 3 * n);
    EXPECT_NEAR(two.ScorePair(x, y3), 3 * two.ScorePair(x, y), 1e-9);
  }
}

// ------------------------------------------------------------------ hinge

TEST(HingeTest, EqualNegativeWithZeroMarginIsFree) {
  Rng rng(3);
  EmbeddingModel m(10, 4, false, 0.3, rng);
  const BagOfTokens x = MakeBag({{1, 1}, {2, 1}});
  const BagOfTokens pos = MakeBag({{5, 1}});
  const std::vector<const BagOfTokens*> negs = {&pos};
  EmbeddingModel::Gradient g{RowGradient(4), RowGradient(4)};
  EXPECT_EQ(m.HingeLoss(x, pos, negs, 0.0, &g), 0.0);
  EXPECT_EQ(g.in.SquaredNorm() + g.out.SquaredNorm(), 0.0);
  const Matrix before = m.u_in();
  m.Apply(g, 0.1);
  EXPECT_EQ(m.u_in(), before);
}

void CheckHingeGradient(bool single_dict, uint64_t seed) {
  Rng rng(seed);
  const int V = 10, d = 4;
  EmbeddingModel m(V, d, single_dict, 0.3, rng);
  const BagOfTokens x = RandomBag(rng, V, 3);
  const BagOfTokens pos = RandomBag(rng, V, 2);
  const std::vector<BagOfTokens> neg_bags = {RandomBag(rng, V, 2), RandomBag(rng, V, 3),
                                             RandomBag(rng, V, 1)};
  // A wide margin keeps every hinge term active, away from the kink.
  EXPECT_LT(testing::HingeGradientError(m, x, pos, Ptrs(neg_bags), 5.0), 1e-4)
      << "single_dict " << single_dict << " seed " << seed;
}

TEST(HingeTest, GradientMatchesFiniteDifferences) {
  for (uint64_t seed = 10; seed < 15; ++seed) {
    CheckHingeGradient(false, seed);
    CheckHingeGradient(true, seed);
  }
}

std::vector<EncodedExample> TinyEntityData(int n_examples) {
  auto ents = std::make_shared<CandidateSet>();
  for (TokenId id = 6; id < 10; ++id) {
    ents->bags.push_back(MakeBag({{id, 1}}));
    ents->texts.push_back("e" + std::to_string(id));
  }
  std::vector<EncodedExample> data;
  for (int i = 0; i < n_examples; ++i) {
    EncodedExample ex;
    ex.input = MakeBag({{static_cast<TokenId>(2 + i % 4), 1}});
    ex.candidates = ents;
    ex.gold = {i % 4};
    ex.entity_candidates = true;
    data.push_back(ex);
  }
  return data;
}

TEST(EmbedTrainTest, TinyDatasetLossDoesNotIncrease) {
  const auto data = TinyEntityData(4);
  TrainConfig cfg;
  cfg.model = ModelKind::kSupEmb;
  cfg.d = 4;
  cfg.epochs = 5;
  cfg.lambda = 0.05;
  cfg.n_neg = 3;
  cfg.margin = 0.5;
  Rng rng(DeriveSeed(cfg.seed, 0));
  EmbeddingModel m(10, cfg.d, false, cfg.init_std, rng);
  const auto losses = m.Train(data, cfg, nullptr);
  ASSERT_EQ(losses.size(), 5u);
  for (size_t e = 1; e < losses.size(); ++e) EXPECT_LE(losses[e], losses[e - 1]) << e;

  Rng rng2(DeriveSeed(cfg.seed, 0));
  EmbeddingModel again(10, cfg.d, false, cfg.init_std, rng2);
  EXPECT_EQ(again.Train(data, cfg, nullptr), losses);
  EXPECT_EQ(again.u_in(), m.u_in());
}

TEST(EmbedTrainTest, DivergenceAbortsWithLocation) {
  const auto data = TinyEntityData(4);
  TrainConfig cfg;
  cfg.d = 4;
  cfg.epochs = 50;
  cfg.lambda = 1e150;
  cfg.n_neg = 3;
  cfg.margin = 1.0;
  Rng rng(1);
  EmbeddingModel m(10, cfg.d, true, 1.0, rng);
  try {
    m.Train(data, cfg, nullptr);
    FAIL() << "expected NumericalError";
  } catch (const NumericalError& e) {
    EXPECT_NE(std::string(e.what()).find("epoch"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("step"), std::string::npos);
  }
}

// ----------------------------------------------------------- build_memory

struct ChowFixture {
  KnowledgeBase kb = testing::ChowKb();
  Vocabulary vocab;
  ChowFixture() {
    std::vector<std::string> names, corpus;
    for (size_t e = 0; e < kb.num_entities(); ++e) names.push_back(kb.EntityName(e));
    for (size_t f = 0; f < kb.num_facts(); ++f) corpus.push_back(kb.RenderFact(f));
    for (const char* s : {"tell me about stephen chow", "hello there", "hi there friend",
                          "what do you think", "i liked it"}) {
      corpus.push_back(s);
    }
    vocab = Vocabulary::Build(corpus, names, 1);
  }
  // Memory bag of a fact, built independently from the KB record.
  BagOfTokens FactBag(FactId f) const {
    const Fact& fact = kb.fact(f);
    std::vector<TokenId> ids;
    for (TokenId t : vocab.Tokenize(kb.EntityName(fact.subject))) ids.push_back(t);
    for (TokenId t : vocab.Tokenize(RelationName(fact.relation))) ids.push_back(t);
    for (EntityId o : fact.objects) {
      for (TokenId t : vocab.Tokenize(kb.EntityName(o))) ids.push_back(t);
    }
    return Bag(ids);
  }
  std::vector<FactId> FactsMentioning(std::initializer_list<const char*> names) const {
    std::vector<FactId> out;
    for (FactId f = 0; f < static_cast<FactId>(kb.num_facts()); ++f) {
      const Fact& fact = kb.fact(f);
      std::vector<EntityId> ents = {fact.subject};
      ents.insert(ents.end(), fact.objects.begin(), fact.objects.end());
      bool hit = false;
      for (EntityId e : ents) {
        for (const char* n : names) hit |= kb.EntityName(e) == n;
      }
      if (hit) out.push_back(f);
    }
    return out;
  }
};

TEST(BuildMemoryTest, ChowInputRecallsChowFacts) {
  const ChowFixture fx;
  const MemoryState ms = BuildMemory({}, "tell me about stephen chow", &fx.kb, fx.vocab, {});
  EXPECT_EQ(ms.num_short_term, 0);
  const auto expect = fx.FactsMentioning({"stephen chow"});
  ASSERT_EQ(expect.size(), 15u);
  ASSERT_EQ(ms.items.size(), expect.size());
  for (size_t i = 0; i < expect.size(); ++i) {
    EXPECT_EQ(ms.items[i].slot, 0);
    EXPECT_EQ(ms.items[i].bag, fx.FactBag(expect[i])) << fx.kb.RenderFact(expect[i]);
  }
}

TEST(BuildMemoryTest, TwoTurnsWithCutoffZeroAreShortTermOnly) {
  const ChowFixture fx;
  MemoryConfig cfg;
  cfg.hash_cutoff = 0;
  const std::vector<Turn> ctx = {{"hello there", "stephen chow"}, {"what do you think", "i liked it"}};
  const MemoryState ms = BuildMemory(ctx, "hi there friend", &fx.kb, fx.vocab, cfg);
  ASSERT_EQ(ms.items.size(), 4u);
  EXPECT_EQ(ms.num_short_term, 4);
  const std::vector<int> slots = {4, 3, 2, 1};
  const std::vector<std::string> texts = {"hello there", "stephen chow", "what do you think",
                                          "i liked it"};
  for (size_t i = 0; i < 4; ++i) {
    EXPECT_EQ(ms.items[i].slot, slots[i]);
    EXPECT_EQ(ms.items[i].bag, Bag(fx.vocab.Tokenize(texts[i])));
  }
  EXPECT_EQ(ms.input, Bag(fx.vocab.Tokenize("hi there friend")));
}

TEST(BuildMemoryTest, CapKeepsRarestThenLowestFactId) {
  const ChowFixture fx;
  MemoryConfig cfg;
  cfg.max_memories = 5;
  // All 15 Chow facts share one frequency: the first five by id survive.
  const MemoryState a = BuildMemory({}, "stephen chow", &fx.kb, fx.vocab, cfg);
  const auto chow = fx.FactsMentioning({"stephen chow"});
  ASSERT_EQ(a.items.size(), 5u);
  for (size_t i = 0; i < 5; ++i) EXPECT_EQ(a.items[i].bag, fx.FactBag(chow[i]));

  // 19 matching facts: the movie titles are rarer (6 facts each) than
  // "stephen chow" (15), so the first Shaolin Soccer facts win.
  cfg.max_memories = 50;
  const std::string q = "stephen chow shaolin soccer kung fu hustle";
  ASSERT_EQ(BuildMemory({}, q, &fx.kb, fx.vocab, cfg).items.size(), 19u);
  cfg.max_memories = 5;
  const MemoryState b = BuildMemory({}, q, &fx.kb, fx.vocab, cfg);
  const auto shaolin = fx.FactsMentioning({"shaolin soccer"});
  ASSERT_EQ(b.items.size(), 5u);
  for (size_t i = 0; i < 5; ++i) EXPECT_EQ(b.items[i].bag, fx.FactBag(shaolin[i]));
}

TEST(BuildMemoryTest, HashWindowLimitsQueryMessages) {
  const ChowFixture fx;
  MemoryConfig cfg;
  cfg.hash_n = 1;
  const std::vector<Turn> ctx = {{"tell me about stephen chow", "hello there"}};
  EXPECT_EQ(BuildMemory(ctx, "what do you think", &fx.kb, fx.vocab, cfg).items.size(), 2u);
  cfg.hash_n = 3;
  EXPECT_EQ(BuildMemory(ctx, "what do you think", &fx.kb, fx.vocab, cfg).items.size(), 17u);
  cfg.use_kb = false;
  EXPECT_EQ(BuildMemory(ctx, "what do you think", &fx.kb, fx.vocab, cfg).items.size(), 2u);
}

TEST(BuildMemoryTest, SlotsClampAtTableSize) {
  const ChowFixture fx;
  MemoryConfig cfg;
  cfg.max_memories = 2;  // slots 0..2
  const std::vector<Turn> ctx = {{"hello there", "i liked it"}, {"hello there", "i liked it"}};
  const MemoryState ms = BuildMemory(ctx, "hi there friend", &fx.kb, fx.vocab, cfg);
  ASSERT_EQ(ms.items.size(), 4u);
  EXPECT_EQ(ms.items[0].slot, 2);
  EXPECT_EQ(ms.items[1].slot, 2);
  EXPECT_EQ(ms.items[2].slot, 2);
  EXPECT_EQ(ms.items[3].slot, 1);
}

// Rewrites a vocabulary file with its non-reserved lines shuffled.
Vocabulary PermutedVocab(const Vocabulary& v, const std::string& dir, uint64_t seed,
                         std::vector<TokenId>* old_to_new) {
  v.Save(dir + "/v.tsv");
  std::ifstream in(dir + "/v.tsv");
  std::vector<std::string> lines;
  for (std::string l; std::getline(in, l);) lines.push_back(l);
  std::vector<TokenId> order(lines.size());
  std::iota(order.begin(), order.end(), 0);
  Rng rng(seed);
  std::shuffle(order.begin() + 2, order.end(), rng);
  std::ofstream out(dir + "/p.tsv");
  old_to_new->assign(lines.size(), 0);
  for (size_t i = 0; i < order.size(); ++i) {
    out << lines[order[i]] << '\n';
    (*old_to_new)[order[i]] = static_cast<TokenId>(i);
  }
  out.close();
  return Vocabulary::Load(dir + "/p.tsv");
}

BagOfTokens Relabel(const BagOfTokens& b, const std::vector<TokenId>& map) {
  BagOfTokens out;
  for (const auto& [id, n] : b) out.Add(map[id], n);
  return out;
}

TEST(BuildMemoryTest, InvariantUnderVocabularyPermutation) {
  const ChowFixture fx;
  std::vector<TokenId> map;
  const Vocabulary pv = PermutedVocab(fx.vocab, testing::TempDir("vocab_perm"), 5, &map);
  ASSERT_EQ(pv.size(), fx.vocab.size());
  const std::vector<Turn> ctx = {{"hello there", "i liked it"}};
  const std::string input = "tell me about stephen chow and kung fu hustle";
  const MemoryState a = BuildMemory(ctx, input, &fx.kb, fx.vocab, {});
  const MemoryState b = BuildMemory(ctx, input, &fx.kb, pv, {});
  ASSERT_EQ(a.items.size(), b.items.size());
  for (size_t i = 0; i < a.items.size(); ++i) {
    EXPECT_EQ(Relabel(a.items[i].bag, map), b.items[i].bag);
    EXPECT_EQ(a.items[i].slot, b.items[i].slot);
  }

  // Attention is unchanged when the embedding rows move with their tokens.
  Rng rng(6);
  const int d = 5;
  MemN2N m(fx.vocab.size(), d, 2, 1, MemoryConfig{}.time_slots(), 0.3, rng);
  Matrix pa(fx.vocab.size(), d);
  for (size_t t = 0; t < fx.vocab.size(); ++t) {
    for (int k = 0; k < d; ++k) pa(map[t], k) = m.A()(t, k);
  }
  const MemN2N pm({pa}, 1, m.R(), m.T());
  const BagOfTokens cand = MakeBag({{2, 1}});
  const BagOfTokens pcand = Relabel(cand, map);
  const std::vector<const BagOfTokens*> c1 = {&cand}, c2 = {&pcand};
  const auto ta = m.Forward(a, c1);
  const auto tb = pm.Forward(b, c2);
  for (size_t k = 0; k < ta.attention.size(); ++k) {
    for (size_t i = 0; i < ta.attention[k].size(); ++i) {
      EXPECT_NEAR(ta.attention[k][i], tb.attention[k][i], 1e-12);
    }
  }
}

// ---------------------------------------------------------------- MemN2N

MemoryState RandomMemory(Rng& rng, int V, int n_items, int time_slots) {
  MemoryState ms;
  ms.input = RandomBag(rng, V, 3);
  for (int i = 0; i < n_items; ++i) {
    ms.items.push_back({RandomBag(rng, V, UniformInt(rng, 1, 3)),
                        UniformInt(rng, 0, time_slots - 1)});
  }
  return ms;
}

TEST(MemN2NTest, SingleItemGetsFullAttention) {
  Rng rng(7);
  const MemN2N m(8, 3, 3, 1, 4, 0.5, rng);
  MemoryState ms;
  ms.input = MakeBag({{2, 1}});
  ms.items.push_back({MakeBag({{3, 1}}), 1});
  const BagOfTokens c = MakeBag({{4, 1}});
  const std::vector<const BagOfTokens*> cands = {&c};
  const auto tr = m.Forward(ms, cands);
  ASSERT_EQ(tr.attention.size(), 3u);
  for (const Vector& p : tr.attention) EXPECT_DOUBLE_EQ(p[0], 1.0);
}

TEST(MemN2NTest, IdenticalItemsSplitAttention) {
  Rng rng(8);
  const MemN2N m(8, 3, 2, 2, 4, 0.5, rng);
  MemoryState ms;
  ms.input = MakeBag({{2, 1}});
  ms.items.push_back({MakeBag({{3, 1}, {5, 1}}), 2});
  ms.items.push_back({MakeBag({{3, 1}, {5, 1}}), 2});
  const BagOfTokens c = MakeBag({{4, 1}});
  const std::vector<const BagOfTokens*> cands = {&c};
  for (const Vector& p : m.Forward(ms, cands).attention) {
    EXPECT_NEAR(p[0], 0.5, 1e-12);
    EXPECT_NEAR(p[1], 0.5, 1e-12);
  }
}

// Dense forward pass written directly from the model equations.
Vector OracleScores(const MemN2N& m, const MemoryState& ms,
                    const std::vector<const BagOfTokens*>& cands) {
  const size_t d = m.dim();
  auto embed = [&](const BagOfTokens& b, const Matrix& e) {
    Vector v(d, 0.0);
    for (const auto& [id, n] : b) {
      for (size_t k = 0; k < d; ++k) v[k] += n * e(id, k);
    }
    return v;
  };
  Vector u = embed(ms.input, m.A());
  std::vector<Vector> mem;
  for (const MemoryItem& it : ms.items) {
    Vector v = embed(it.bag, m.C());
    for (size_t k = 0; k < d; ++k) v[k] += m.T()(it.slot, k);
    mem.push_back(v);
  }
  if (!mem.empty()) {
    for (int hop = 0; hop < m.hops(); ++hop) {
      Vector logits;
      for (const Vector& mi : mem) {
        double s = 0;
        for (size_t k = 0; k < d; ++k) s += u[k] * mi[k];
        logits.push_back(s);
      }
      const double mx = *std::max_element(logits.begin(), logits.end());
      double z = 0;
      for (double& l : logits) z += (l = std::exp(l - mx));
      Vector o(d, 0.0);
      for (size_t i = 0; i < mem.size(); ++i) {
        for (size_t k = 0; k < d; ++k) o[k] += logits[i] / z * mem[i][k];
      }
      Vector next(d, 0.0);
      for (size_t r = 0; r < d; ++r) {
        for (size_t c = 0; c < d; ++c) next[r] += m.R()[hop](r, c) * o[c];
        next[r] += u[r];
      }
      u = next;
    }
  }
  Vector scores;
  for (const BagOfTokens* c : cands) {
    const Vector y = embed(*c, m.W());
    double s = 0;
    for (size_t k = 0; k < d; ++k) s += u[k] * y[k];
    scores.push_back(s);
  }
  return scores;
}

TEST(MemN2NTest, ForwardMatchesDenseOracle) {
  Rng rng(9);
  for (int w = 1; w <= 3; ++w) {
    for (int hops : {0, 1, 3}) {
      const MemN2N m(12, 4, hops, w, 5, 0.4, rng);
      const MemoryState ms = RandomMemory(rng, 12, 4, 5);
      std::vector<BagOfTokens> cbags;
      for (TokenId t = 0; t < 12; ++t) cbags.push_back(MakeBag({{t, 1}}));
      const auto cands = Ptrs(cbags);
      const auto tr = m.Forward(ms, cands);
      const Vector oracle = OracleScores(m, ms, cands);
      double sum = 0;
      for (size_t c = 0; c < cands.size(); ++c) {
        EXPECT_NEAR(tr.scores[c], oracle[c], 1e-10);
        EXPECT_GE(tr.probs[c], 0.0);
        sum += tr.probs[c];
      }
      EXPECT_NEAR(sum, 1.0, 1e-6);
      for (const Vector& p : tr.attention) {
        EXPECT_NEAR(std::accumulate(p.begin(), p.end(), 0.0), 1.0, 1e-6);
        for (double x : p) EXPECT_GE(x, 0.0);
      }
    }
  }
}

TEST(MemN2NTest, NoHopsNoMemoryEqualsTwoDictEmbedding) {
  Rng rng(10);
  for (int t = 0; t < 20; ++t) {
    const Matrix a = Matrix::Gaussian(15, 4, 0.5, rng);
    const Matrix w = Matrix::Gaussian(15, 4, 0.5, rng);
    const MemN2N mem({a, w}, 2, {}, Matrix(3, 4));
    const EmbeddingModel emb(a, w);
    MemoryState ms;
    ms.input = RandomBag(rng, 15, 3);
    std::vector<BagOfTokens> cbags;
    for (int c = 0; c < 6; ++c) cbags.push_back(RandomBag(rng, 15, 2));
    const auto cands = Ptrs(cbags);
    const Vector s = mem.Forward(ms, cands).scores;
    Vector e;
    for (const BagOfTokens& c : cbags) e.push_back(emb.ScorePair(ms.input, c));
    std::vector<int> all(cands.size());
    std::iota(all.begin(), all.end(), 0);
    EXPECT_EQ(RankCandidates(s), RankCandidates(e));
    for (size_t c = 0; c < s.size(); ++c) EXPECT_NEAR(s[c], e[c], 1e-10);
  }
}

void CheckMemN2NGradient(int w, int hops, uint64_t seed, std::vector<int> gold) {
  Rng rng(seed);
  const int V = 8, d = 3, slots = 4;
  MemN2N m(V, d, hops, w, slots, 0.5, rng);
  const MemoryState ms = RandomMemory(rng, V, 2, slots);
  std::vector<BagOfTokens> cbags;
  for (int c = 0; c < 4; ++c) cbags.push_back(RandomBag(rng, V, 2));
  EXPECT_LT(testing::MemN2NGradientError(m, ms, Ptrs(cbags), gold), 1e-4)
      << "w " << w << " hops " << hops;
}

TEST(MemN2NTest, GradientMatchesFiniteDifferences) {
  uint64_t seed = 100;
  for (int w = 1; w <= 3; ++w) {
    for (int hops = 0; hops <= 4; ++hops) {
      CheckMemN2NGradient(w, hops, seed++, {1});
      CheckMemN2NGradient(w, hops, seed++, {0, 3});
    }
  }
}

TEST(MemN2NTest, ConfidentGoldHasNearZeroLossAndGradient) {
  Matrix a(6, 3), w(6, 3);
  a(2, 0) = 1;   // input token
  w(3, 0) = 50;  // gold candidate aligned with q
  const MemN2N m({a, w}, 2, {}, Matrix(2, 3));
  MemoryState ms;
  ms.input = MakeBag({{2, 1}});
  const std::vector<BagOfTokens> cbags = {MakeBag({{3, 1}}), MakeBag({{4, 1}}),
                                          MakeBag({{5, 1}})};
  const auto cands = Ptrs(cbags);
  const std::vector<int> gold = {0};
  MemN2N::Gradient g = m.ZeroGradient();
  EXPECT_LT(m.Loss(ms, cands, gold, &g), 1e-15);
  double norm = 0;
  for (const Matrix& d : m.DenseGradient(g)) {
    for (double x : d.data()) norm += x * x;
  }
  EXPECT_LT(norm, 1e-25);
}

TEST(MemN2NTest, ConsecutiveStepsDecreaseLoss) {
  Rng rng(11);
  for (int w = 1; w <= 3; ++w) {
    MemN2N m(8, 3, 2, w, 4, 0.5, rng);
    const MemoryState ms = RandomMemory(rng, 8, 2, 4);
    std::vector<BagOfTokens> cbags;
    for (int c = 0; c < 4; ++c) cbags.push_back(RandomBag(rng, 8, 2));
    const auto cands = Ptrs(cbags);
    const std::vector<int> gold = {2};
    const double l1 = m.TrainStep(ms, cands, gold, 0.01);
    const double l2 = m.TrainStep(ms, cands, gold, 0.01);
    const double l3 = m.Loss(ms, cands, gold, nullptr);
    EXPECT_LT(l2, l1);
    EXPECT_LT(l3, l2);
  }
}

TEST(RankingTest, ShiftInvariance) {
  Rng rng(12);
  for (int t = 0; t < 20; ++t) {
    Vector s(30);
    for (double& x : s) x = UniformInt(rng, 0, 10) * 0.25;
    Vector shifted = s;
    for (double& x : shifted) x += 17.0;
    EXPECT_EQ(RankCandidates(s), RankCandidates(shifted));
  }
}

// ----------------------------------------------------------------- TF-IDF

EncodedExample Query(BagOfTokens input, std::vector<BagOfTokens> cands,
                     std::vector<BagOfTokens> messages = {}) {
  auto set = std::make_shared<CandidateSet>();
  set->bags = std::move(cands);
  set->texts.resize(set->bags.size());
  EncodedExample ex;
  ex.input = std::move(input);
  ex.messages = std::move(messages);
  ex.candidates = set;
  ex.entity_candidates = false;
  return ex;
}

TEST(TfIdfTest, ThreeDocumentHandCalculation) {
  // Tokens a=2, b=3, c=4, d=5 over three documents.
  const std::vector<BagOfTokens> docs = {MakeBag({{2, 1}, {3, 1}}), MakeBag({{2, 1}, {4, 1}}),
                                         MakeBag({{2, 1}, {3, 1}, {5, 1}})};
  const Vector idf = TfIdfModel::ComputeIdf(docs, 6);
  const double lb = std::log(3.0 / 2), lc = std::log(3.0), ld = std::log(3.0);
  EXPECT_DOUBLE_EQ(idf[2], 0.0);
  EXPECT_DOUBLE_EQ(idf[3], lb);
  EXPECT_DOUBLE_EQ(idf[4], lc);
  EXPECT_DOUBLE_EQ(idf[5], ld);
  EXPECT_DOUBLE_EQ(idf[0], std::log(3.0));

  const TfIdfModel m(idf, {});
  const EncodedExample ex = Query(MakeBag({{3, 1}, {4, 1}}), docs);
  const Vector s = m.Score(ex);
  const double qn = std::sqrt(lb * lb + lc * lc);
  EXPECT_NEAR(s[0], lb * lb / (qn * lb), 1e-12);
  EXPECT_NEAR(s[1], lc * lc / (qn * lc), 1e-12);
  EXPECT_NEAR(s[2], lb * lb / (qn * std::sqrt(lb * lb + ld * ld)), 1e-12);
  EXPECT_EQ(RankCandidates(s), (std::vector<int>{1, 0, 2}));
}

TEST(TfIdfTest, IdenticalAndOrthogonalCandidates) {
  const Vector idf = {1, 1, 0.5, 2, 1.5, 1, 3};
  const TfIdfModel m(idf, {});
  const BagOfTokens q = MakeBag({{3, 2}, {4, 1}});
  const Vector s = m.Score(Query(q, {MakeBag({{5, 1}, {6, 1}}), q}));
  EXPECT_DOUBLE_EQ(s[0], 0.0);
  EXPECT_NEAR(s[1], 1.0, 1e-12);
  EXPECT_EQ(RankCandidates(s)[0], 1);
}

TEST(TfIdfTest, EmptyContextEqualsQueryOnly) {
  Rng rng(13);
  const Vector idf = {1, 1, 0.5, 2, 1.5, 1, 3, 0.2, 0.7, 1.1};
  TfIdfModel with(idf, {2, true, 0.0});
  TfIdfModel without(idf, {2, false, 0.0});
  for (int t = 0; t < 20; ++t) {
    std::vector<BagOfTokens> cands;
    for (int c = 0; c < 5; ++c) cands.push_back(RandomBag(rng, 10, 3));
    const EncodedExample ex = Query(RandomBag(rng, 10, 3), cands);
    EXPECT_EQ(with.Score(ex), without.Score(ex));
  }
  // With context the query grows.
  const EncodedExample ctx = Query(MakeBag({{3, 1}}), {MakeBag({{3, 1}}), MakeBag({{6, 1}})},
                                   {MakeBag({{6, 3}})});
  EXPECT_EQ(RankCandidates(with.Score(ctx))[0], 1);
  EXPECT_EQ(RankCandidates(without.Score(ctx))[0], 0);
}

TEST(TfIdfTest, VariantOneAnswersWithNearestResponse) {
  const Vector idf(10, 1.0);
  TfIdfModel m(idf, {1, true, 0.0});
  m.SetPairs({{MakeBag({{2, 1}, {3, 1}}), MakeBag({{7, 1}})},
              {MakeBag({{4, 1}, {5, 1}}), MakeBag({{8, 1}})}});
  const Vector s = m.Score(Query(MakeBag({{4, 1}}), {MakeBag({{7, 1}}), MakeBag({{8, 1}})}));
  EXPECT_DOUBLE_EQ(s[0], 0.0);
  EXPECT_NEAR(s[1], 1.0, 1e-12);
}

TEST(TfIdfTest, RelevanceFeedbackAddsNearestResponse) {
  const Vector idf(10, 1.0);
  TfIdfModel m(idf, {2, true, 0.5});
  m.SetPairs({{MakeBag({{2, 1}}), MakeBag({{3, 1}, {9, 1}})}});
  // Query {3} plus 0.5 * {3, 9} = {3: 1.5, 9: 0.5}.
  const Vector s = m.Score(Query(MakeBag({{3, 1}}), {MakeBag({{9, 1}}), MakeBag({{3, 1}})}));
  const double qn = std::sqrt(1.5 * 1.5 + 0.5 * 0.5);
  EXPECT_NEAR(s[0], 0.5 / qn, 1e-12);
  EXPECT_NEAR(s[1], 1.5 / qn, 1e-12);
}

// --------------------------------------------------------------------- MF

std::vector<RatingTriple> RankOneRatings(int users, int items, Rng& rng) {
  std::uniform_real_distribution<double> ua(1.0, 2.0), ub(1.0, 2.5);
  Vector a(users), b(items);
  for (double& x : a) x = ua(rng);
  for (double& x : b) x = ub(rng);
  std::vector<RatingTriple> out;
  for (int u = 0; u < users; ++u) {
    for (int i = 0; i < items; ++i) out.push_back({u, static_cast<TokenId>(i + 2), a[u] * b[i]});
  }
  return out;
}

TEST(MfTest, RecoversRankOneMatrix) {
  Rng rng(14);
  const auto ratings = RankOneRatings(20, 15, rng);
  TrainConfig cfg;
  cfg.model = ModelKind::kMf;
  cfg.d = 1;
  cfg.mf_reg = 0.0;
  cfg.lambda = 0.01;
  cfg.epochs = 400;
  cfg.init_std = 0.5;
  const MfModel m = MfModel::Train(ratings, 20, 17, cfg);
  double sq = 0;
  for (const RatingTriple& r : ratings) {
    const double e = r.value - m.Predict(r.user, r.item);
    sq += e * e;
  }
  EXPECT_LT(std::sqrt(sq / ratings.size()), 0.05);
}

TEST(MfTest, RankingExcludesHistoryAndFollowsFittedUser) {
  Rng rng(15);
  const auto ratings = RankOneRatings(10, 12, rng);
  TrainConfig cfg;
  cfg.d = 3;
  cfg.epochs = 50;
  cfg.lambda = 0.01;
  for (double reg : {0.0, 0.1}) {
    cfg.mf_reg = reg;
    const MfModel m = MfModel::Train(ratings, 10, 16, cfg);
    std::vector<TokenId> all;
    for (TokenId t = 2; t < 14; ++t) all.push_back(t);
    EXPECT_TRUE(m.Rank(all).empty());

    const std::vector<TokenId> history = {3, 7};
    const Vector u = m.FitUser(history);
    // Normal equations of the ridge fit: (H^T H + reg I) u = H^T 5.
    for (int k = 0; k < cfg.d; ++k) {
      double lhs = reg * u[k], rhs = 0;
      for (TokenId h : history) {
        lhs += m.items()(h, k) * Dot(m.items().Row(h), u);
        rhs += 5 * m.items()(h, k);
      }
      EXPECT_NEAR(lhs, rhs, 1e-8);
    }
    std::vector<std::pair<double, TokenId>> oracle;
    for (TokenId t = 2; t < 14; ++t) {
      if (t != 3 && t != 7) oracle.emplace_back(-Dot(m.items().Row(t), u), t);
    }
    std::sort(oracle.begin(), oracle.end());
    std::vector<TokenId> expect;
    for (const auto& [s, t] : oracle) expect.push_back(t);
    EXPECT_EQ(m.Rank(history), expect);
    EXPECT_EQ(m.Rank(history), m.Rank(history));
  }
}

TEST(MfTest, ScoreUsesUserHistoryAndSkipsUnknown) {
  Rng rng(16);
  const auto ratings = RankOneRatings(10, 6, rng);
  TrainConfig cfg;
  cfg.d = 2;
  cfg.epochs = 30;
  const MfModel m = MfModel::Train(ratings, 10, 12, cfg);
  // Candidates: unknown token, a history item, and two fresh items.
  const EncodedExample ex = Query(MakeBag({{2, 1}, {10, 1}}),
                                  {MakeBag({{10, 1}}), MakeBag({{2, 1}}), MakeBag({{4, 1}}),
                                   MakeBag({{5, 1}, {11, 1}})});
  const Vector s = m.Score(ex);
  EXPECT_EQ(s[0], -std::numeric_limits<double>::infinity());
  EXPECT_EQ(s[1], -std::numeric_limits<double>::infinity());
  const std::vector<TokenId> history = {2};
  const Vector u = m.FitUser(history);
  EXPECT_NEAR(s[2], Dot(m.items().Row(4), u), 1e-12);
  EXPECT_NEAR(s[3], Dot(m.items().Row(5), u), 1e-12);
}

// ------------------------------------------------------------ negatives

TEST(NegativesTest, NeverSampleGold) {
  Rng rng(17);
  auto data = TinyEntityData(4);
  for (const EncodedExample& ex : data) {
    for (int t = 0; t < 20; ++t) {
      const auto negs = SampleNegatives(ex, CandidateSet(), 3, rng);
      EXPECT_EQ(negs.size(), 3u);
      for (const BagOfTokens* n : negs) EXPECT_NE(n, &ex.candidate(ex.gold[0]));
    }
  }
  CandidateSet responses;
  for (TokenId t = 2; t < 8; ++t) {
    responses.bags.push_back(MakeBag({{t, 1}}));
    responses.texts.push_back("r" + std::to_string(t));
  }
  EncodedExample ex = Query(MakeBag({{2, 1}}), {});
  ex.appended = MakeBag({{4, 1}});
  ex.appended_text = "r4";
  ex.gold = {0};
  for (int t = 0; t < 50; ++t) {
    for (const BagOfTokens* n : SampleNegatives(ex, responses, 4, rng)) {
      EXPECT_NE(*n, *ex.appended);
    }
  }
}

// ----------------------------------------------------------------- config

TEST(ConfigTest, TextRoundTripAndValidation) {
  TrainConfig c;
  c.model = ModelKind::kSupEmb;
  c.lambda = 0.0025;
  c.w = 2;
  c.memory.hash_n = 3;
  c.memory.use_kb = false;
  c.rf_weight = 0.5;
  c.seed = 1234567890123ULL;
  const TrainConfig back = TrainConfig::FromText(c.ToText());
  EXPECT_EQ(back.ToText(), c.ToText());
  EXPECT_EQ(back.lambda, c.lambda);
  EXPECT_EQ(back.seed, c.seed);
  EXPECT_FALSE(back.memory.use_kb);
  EXPECT_THROW(TrainConfig::FromText("bogus = 1\n"), DataError);
  EXPECT_THROW(TrainConfig::FromText("d = many\n"), DataError);
  TrainConfig bad = c;
  bad.w = 3;  // supemb supports at most two dictionaries
  EXPECT_THROW(bad.Validate(), UsageError);
  bad = TrainConfig();
  bad.lambda = 0;
  EXPECT_THROW(bad.Validate(), UsageError);
  bad = TrainConfig();
  bad.n_neg = 0;
  EXPECT_THROW(bad.Validate(), UsageError);
  TrainConfig ok;
  ok.w = 3;
  EXPECT_NO_THROW(ok.Validate());
}

// --------------------------------------------------------------- model io

TEST(ModelIoTest, RoundTripEveryKind) {
  const std::string dir = testing::TempDir("model_io");
  Rng rng(18);
  const auto data = TinyEntityData(4);
  std::vector<ModelBundle> bundles(6);
  bundles[0].config.model = ModelKind::kSupEmb;
  bundles[0].supemb = std::make_unique<EmbeddingModel>(10, 3, true, 0.2, rng);
  bundles[1].config.model = ModelKind::kSupEmb;
  bundles[1].config.w = 2;
  bundles[1].supemb = std::make_unique<EmbeddingModel>(10, 3, false, 0.2, rng);
  for (int w = 1; w <= 2; ++w) {
    auto& b = bundles[1 + w];
    b.config.model = ModelKind::kMemN2N;
    b.config.w = w + 1;
    b.config.hops = 2;
    b.memn2n = std::make_unique<MemN2N>(10, 3, 2, w + 1, 51, 0.2, rng);
  }
  bundles[4].config.model = ModelKind::kIr;
  bundles[4].config.rf_weight = 0.5;
  bundles[4].ir = std::make_unique<TfIdfModel>(Vector{1, 2, 0, 0.5, 1, 1, 2, 3, 1, 1},
                                               TfIdfModel::Options{2, true, 0.5});
  bundles[4].ir->SetPairs({{MakeBag({{2, 2}}), MakeBag({{6, 1}, {7, 1}})}});
  bundles[5].config.model = ModelKind::kMf;
  bundles[5].config.d = 2;
  const auto ratings = RankOneRatings(5, 8, rng);
  bundles[5].mf = std::make_unique<MfModel>(MfModel::Train(ratings, 5, 10, bundles[5].config));

  for (size_t i = 0; i < bundles.size(); ++i) {
    const std::string path = dir + "/m" + std::to_string(i) + ".bin";
    SaveModel(path, bundles[i]);
    const ModelBundle back = LoadModel(path);
    EXPECT_EQ(back.kind(), bundles[i].kind());
    EXPECT_EQ(back.config.ToText(), bundles[i].config.ToText());
    for (const EncodedExample& ex : data) {
      EXPECT_EQ(back.scorer().Score(ex), bundles[i].scorer().Score(ex)) << i;
    }
  }
  EXPECT_EQ(LoadModel(dir + "/m2.bin").memn2n->T(), bundles[2].memn2n->T());
  EXPECT_EQ(LoadModel(dir + "/m3.bin").memn2n->embeddings(), bundles[3].memn2n->embeddings());
}

TEST(ModelIoTest, RejectsCorruptFiles) {
  const std::string dir = testing::TempDir("model_io_bad");
  Rng rng(19);
  ModelBundle b;
  b.config.model = ModelKind::kMemN2N;
  b.memn2n = std::make_unique<MemN2N>(10, 3, 1, 1, 51, 0.2, rng);
  SaveModel(dir + "/m.bin", b);
  const std::string bytes = testing::ReadFile(dir + "/m.bin");
  testing::WriteFile(dir + "/trunc.bin", bytes.substr(0, bytes.size() - 9));
  std::filesystem::copy_file(dir + "/m.bin.cfg", dir + "/trunc.bin.cfg");
  EXPECT_THROW(LoadModel(dir + "/trunc.bin"), DataError);
  std::string magic = bytes;
  magic[0] = 'X';
  testing::WriteFile(dir + "/magic.bin", magic);
  std::filesystem::copy_file(dir + "/m.bin.cfg", dir + "/magic.bin.cfg");
  EXPECT_THROW(LoadModel(dir + "/magic.bin"), DataError);
  testing::WriteFile(dir + "/kind.bin", bytes);
  testing::WriteFile(dir + "/kind.bin.cfg", "model = supemb\n");
  EXPECT_THROW(LoadModel(dir + "/kind.bin"), DataError);
  EXPECT_THROW(LoadModel(dir + "/missing.bin"), DataError);
}

}  // namespace
}  // namespace dialeval
