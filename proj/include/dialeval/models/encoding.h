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

#ifndef DIALEVAL_MODELS_ENCODING_H_
#define DIALEVAL_MODELS_ENCODING_H_

#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dialeval/kb/knowledge_base.h"
#include "dialeval/models/config.h"
#include "dialeval/taskgen/example.h"
#include "dialeval/text/vocabulary.h"

namespace dialeval {

struct MemoryItem {
  BagOfTokens bag;
  int slot = 0;  // 0: KB fact; >= 1: dialog message, 1 = most recent
  bool operator==(const MemoryItem&) const = default;
};

// Short-term items (prior messages, oldest first) followed by long-term
// KB facts.
struct MemoryState {
  std::vector<MemoryItem> items;
  BagOfTokens input;
  int num_short_term = 0;
};

// Message bags of a conversation so far: c^u_1, c^r_1, ..., c^r_{t-1}.
std::vector<BagOfTokens> ContextBags(const std::vector<Turn>& context,
                                     const Vocabulary& vocab);

// Memory over prior messages plus facts hashed from the last hash_n
// messages (input included). Facts are ordered by the smallest fact
// frequency of any query token that hit them, then by fact id, and capped
// at max_memories. Each fact becomes subject + relation + object tokens.
MemoryState BuildMemory(std::span<const BagOfTokens> messages,
                        const BagOfTokens& input, const KnowledgeBase* kb,
                        const Vocabulary& vocab, const MemoryConfig& cfg);
MemoryState BuildMemory(const std::vector<Turn>& context, std::string_view input,
                        const KnowledgeBase* kb, const Vocabulary& vocab,
                        const MemoryConfig& cfg);

// Encoded candidates shared by many examples (the entity list or a pool).
struct CandidateSet {
  std::vector<BagOfTokens> bags;
  std::vector<std::string> texts;
};

struct EncodedExample {
  BagOfTokens input;
  std::vector<BagOfTokens> messages;  // prior messages, oldest first
  MemoryState memory;
  std::shared_ptr<const CandidateSet> candidates;
  std::optional<BagOfTokens> appended;  // explicit-list gold, id = pool size
  std::string appended_text;
  std::vector<int> gold;  // sorted candidate ids
  bool entity_candidates = true;

  size_t num_candidates() const {
    return candidates->bags.size() + (appended ? 1 : 0);
  }
  const BagOfTokens& candidate(size_t i) const {
    return i < candidates->bags.size() ? candidates->bags[i] : *appended;
  }
  const std::string& candidate_text(size_t i) const {
    return i < candidates->texts.size() ? candidates->texts[i] : appended_text;
  }
  // Concatenation of the context messages and the input.
  BagOfTokens FullInput() const;
};

// Turns examples into token bags, candidate sets and memories. Entity
// candidates follow the vocabulary's entity order; explicit lists are the
// named pool followed by the gold response.
class Encoder {
 public:
  Encoder(const Vocabulary& vocab, const KnowledgeBase* kb, MemoryConfig memory,
          bool build_memory = true);

  EncodedExample Encode(const Example& ex) const;
  // Encodes a live query with no gold: the candidates are the entity list
  // or the given pool alone.
  EncodedExample EncodeQuery(const std::vector<Turn>& context, std::string_view input,
                             const CandidateSpec& candidates) const;
  std::vector<EncodedExample> EncodeAll(const std::vector<Example>& examples) const;

  const std::shared_ptr<const CandidateSet>& entity_candidates() const {
    return entities_;
  }
  // Candidate id of an entity token, or -1.
  int EntityIndex(TokenId token) const;
  std::shared_ptr<const CandidateSet> EncodePool(const std::vector<std::string>& pool) const;

 private:
  const Vocabulary& vocab_;
  const KnowledgeBase* kb_;
  MemoryConfig memory_;
  bool build_memory_;
  std::shared_ptr<const CandidateSet> entities_;
  std::vector<int> entity_index_;
  mutable std::map<std::shared_ptr<const std::vector<std::string>>,
                   std::shared_ptr<const CandidateSet>>
      pools_;
  std::shared_ptr<const CandidateSet> empty_;
};

// Distinct encoded responses of the explicit-list training examples; the
// negative pool for training on response-ranking tasks.
std::shared_ptr<const CandidateSet> TrainingResponses(
    const std::vector<EncodedExample>& examples);

}  // namespace dialeval

#endif  // DIALEVAL_MODELS_ENCODING_H_
