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

#include "dialeval/models/encoding.h"

#include <algorithm>
#include <limits>
#include <map>
#include <set>

#include "dialeval/errors.h"

namespace dialeval {

std::vector<BagOfTokens> ContextBags(const std::vector<Turn>& context,
                                     const Vocabulary& vocab) {
  std::vector<BagOfTokens> out;
  out.reserve(2 * context.size());
  for (const Turn& t : context) {
    out.push_back(Bag(vocab.Tokenize(t.user)));
    out.push_back(Bag(vocab.Tokenize(t.reply)));
  }
  return out;
}

MemoryState BuildMemory(std::span<const BagOfTokens> messages,
                        const BagOfTokens& input, const KnowledgeBase* kb,
                        const Vocabulary& vocab, const MemoryConfig& cfg) {
  MemoryState ms;
  ms.input = input;
  const int last_slot = std::max(1, cfg.time_slots() - 1);
  for (size_t j = 0; j < messages.size(); ++j) {
    const int slot = static_cast<int>(messages.size() - j);
    ms.items.push_back({messages[j], std::min(slot, last_slot)});
  }
  ms.num_short_term = static_cast<int>(ms.items.size());
  if (!kb || !cfg.use_kb || cfg.max_memories == 0) return ms;

  // Tokens of the trailing hash_n messages; the input is the last message.
  const size_t n_msgs = messages.size() + 1;
  const size_t take = cfg.hash_n == 0 ? n_msgs : std::min<size_t>(cfg.hash_n, n_msgs);
  std::set<TokenId> query;
  for (const auto& [id, count] : input) query.insert(id);
  for (size_t j = messages.size() + 1 - take; j < messages.size(); ++j) {
    for (const auto& [id, count] : messages[j]) query.insert(id);
  }

  std::map<FactId, int> best_freq;
  for (TokenId tok : query) {
    const std::string& sym = vocab.Symbol(tok);
    const int freq = kb->FactFrequency(sym);
    if (freq == 0 || freq > cfg.hash_cutoff) continue;
    for (FactId f : kb->Postings(sym)) {
      auto [it, inserted] = best_freq.emplace(f, freq);
      if (!inserted) it->second = std::min(it->second, freq);
    }
  }
  std::vector<std::pair<int, FactId>> ranked;
  ranked.reserve(best_freq.size());
  for (const auto& [f, freq] : best_freq) ranked.emplace_back(freq, f);
  std::sort(ranked.begin(), ranked.end());
  if (ranked.size() > static_cast<size_t>(cfg.max_memories)) {
    ranked.resize(cfg.max_memories);
  }

  for (const auto& [freq, f] : ranked) {
    const Fact& fact = kb->fact(f);
    BagOfTokens bag;
    auto add = [&](std::string_view name) {
      if (const auto id = vocab.Find(name)) bag.Add(*id);
    };
    add(kb->EntityName(fact.subject));
    add(RelationName(fact.relation));
    for (EntityId o : fact.objects) add(kb->EntityName(o));
    ms.items.push_back({std::move(bag), 0});
  }
  return ms;
}

MemoryState BuildMemory(const std::vector<Turn>& context, std::string_view input,
                        const KnowledgeBase* kb, const Vocabulary& vocab,
                        const MemoryConfig& cfg) {
  const std::vector<BagOfTokens> messages = ContextBags(context, vocab);
  return BuildMemory(messages, Bag(vocab.Tokenize(input)), kb, vocab, cfg);
}

BagOfTokens EncodedExample::FullInput() const {
  BagOfTokens out = input;
  for (const BagOfTokens& m : messages) out.Merge(m);
  return out;
}

Encoder::Encoder(const Vocabulary& vocab, const KnowledgeBase* kb,
                 MemoryConfig memory, bool build_memory)
    : vocab_(vocab),
      kb_(kb),
      memory_(memory),
      build_memory_(build_memory),
      entity_index_(vocab.size(), -1),
      empty_(std::make_shared<const CandidateSet>()) {
  auto set = std::make_shared<CandidateSet>();
  for (TokenId id : vocab.entity_ids()) {
    entity_index_[id] = static_cast<int>(set->bags.size());
    BagOfTokens bag;
    bag.Add(id);
    set->bags.push_back(std::move(bag));
    set->texts.push_back(vocab.Symbol(id));
  }
  entities_ = std::move(set);
}

int Encoder::EntityIndex(TokenId token) const {
  return token >= 0 && static_cast<size_t>(token) < entity_index_.size()
             ? entity_index_[token]
             : -1;
}

std::shared_ptr<const CandidateSet> Encoder::EncodePool(
    const std::vector<std::string>& pool) const {
  auto set = std::make_shared<CandidateSet>();
  set->bags.reserve(pool.size());
  for (const std::string& text : pool) {
    set->bags.push_back(Bag(vocab_.Tokenize(text)));
    set->texts.push_back(text);
  }
  return set;
}

EncodedExample Encoder::Encode(const Example& ex) const {
  EncodedExample out;
  out.input = Bag(vocab_.Tokenize(ex.input));
  out.messages = ContextBags(ex.context, vocab_);
  if (build_memory_) {
    out.memory = BuildMemory(out.messages, out.input, kb_, vocab_, memory_);
  } else {
    out.memory.input = out.input;
  }
  if (ex.gold.empty()) {
    throw DataError("example in dialog " + std::to_string(ex.dialog_id) +
                    " has no gold answer");
  }

  if (ex.candidates.kind == CandidateSpec::Kind::kAllEntities) {
    out.entity_candidates = true;
    out.candidates = entities_;
    for (const std::string& g : ex.gold) {
      const auto id = vocab_.Find(NormalizeText(g));
      const int idx = id ? EntityIndex(*id) : -1;
      if (idx < 0) {
        throw DataError("gold answer '" + g + "' of dialog " +
                        std::to_string(ex.dialog_id) + " is not an entity");
      }
      out.gold.push_back(idx);
    }
    std::sort(out.gold.begin(), out.gold.end());
    out.gold.erase(std::unique(out.gold.begin(), out.gold.end()), out.gold.end());
  } else {
    out.entity_candidates = false;
    if (ex.candidates.pool) {
      auto& cached = pools_[ex.candidates.pool];
      if (!cached) cached = EncodePool(*ex.candidates.pool);
      out.candidates = cached;
    } else {
      out.candidates = empty_;
    }
    out.appended = Bag(vocab_.Tokenize(ex.gold.front()));
    out.appended_text = ex.gold.front();
    out.gold = {static_cast<int>(out.candidates->bags.size())};
  }
  return out;
}

EncodedExample Encoder::EncodeQuery(const std::vector<Turn>& context,
                                    std::string_view input,
                                    const CandidateSpec& candidates) const {
  EncodedExample out;
  out.input = Bag(vocab_.Tokenize(input));
  out.messages = ContextBags(context, vocab_);
  out.memory = BuildMemory(out.messages, out.input, kb_, vocab_, memory_);
  if (candidates.kind == CandidateSpec::Kind::kAllEntities) {
    out.candidates = entities_;
  } else {
    out.entity_candidates = false;
    if (!candidates.pool || candidates.pool->empty()) {
      throw DataError("query needs a non-empty candidate pool");
    }
    out.candidates = EncodePool(*candidates.pool);
  }
  return out;
}

std::vector<EncodedExample> Encoder::EncodeAll(const std::vector<Example>& examples) const {
  std::vector<EncodedExample> out;
  out.reserve(examples.size());
  for (const Example& ex : examples) out.push_back(Encode(ex));
  return out;
}

std::shared_ptr<const CandidateSet> TrainingResponses(
    const std::vector<EncodedExample>& examples) {
  auto set = std::make_shared<CandidateSet>();
  std::set<std::string> seen;
  for (const EncodedExample& ex : examples) {
    if (ex.entity_candidates || !ex.appended) continue;
    if (!seen.insert(ex.appended_text).second) continue;
    set->bags.push_back(*ex.appended);
    set->texts.push_back(ex.appended_text);
  }
  return set;
}

}  // namespace dialeval
