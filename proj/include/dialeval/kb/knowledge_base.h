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

#ifndef DIALEVAL_KB_KNOWLEDGE_BASE_H_
#define DIALEVAL_KB_KNOWLEDGE_BASE_H_

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace dialeval {

using EntityId = int32_t;
using FactId = int32_t;

enum class Relation : uint8_t {
  kDirectedBy,
  kWrittenBy,
  kStarredActors,
  kReleaseYear,
  kHasGenre,
  kHasTags,
  kHasImdbRating,
  kHasImdbVotes,
};

inline constexpr int kNumRelations = 8;
inline constexpr std::array<Relation, kNumRelations> kAllRelations = {
    Relation::kDirectedBy,   Relation::kWrittenBy,     Relation::kStarredActors,
    Relation::kReleaseYear,  Relation::kHasGenre,      Relation::kHasTags,
    Relation::kHasImdbRating, Relation::kHasImdbVotes,
};

std::string_view RelationName(Relation r);
// Accepts the canonical names plus the singular spellings "starred_actor"
// and "has_tag".
std::optional<Relation> ParseRelation(std::string_view name);

struct Triple {
  EntityId subject = 0;
  Relation relation = Relation::kDirectedBy;
  EntityId object = 0;

  auto operator<=>(const Triple&) const = default;
};

// A memory sentence: all objects of one (subject, relation) pair, rendered
// on a single line.
struct Fact {
  EntityId subject = 0;
  Relation relation = Relation::kDirectedBy;
  std::vector<EntityId> objects;  // insertion order
};

// Movie-domain triple store with forward/inverse relation indexes and a
// word -> fact inverted index used for hashed long-term memory lookups.
//
// Entity surface forms are interned after NormalizeText(), so years, rating
// buckets and tags live in the same id space as movies and people. Facts
// group triples by (subject, relation); fact ids follow first insertion.
// The word index keys are entity surface forms, each word of those forms,
// and the relation name of the fact.
//
// Single writer while building; call Freeze() before sharing across threads.
class KnowledgeBase {
 public:
  KnowledgeBase() = default;

  EntityId Intern(std::string_view name);
  std::optional<EntityId> FindEntity(std::string_view name) const;
  const std::string& EntityName(EntityId id) const { return names_[id]; }
  size_t num_entities() const { return names_.size(); }
  bool IsMovie(EntityId id) const;
  // Movie entities in id order.
  std::vector<EntityId> Movies() const;

  // Returns true if the triple was new. Throws DataError for an unknown
  // relation name or an empty entity.
  bool AddTriple(std::string_view subject, std::string_view relation,
                 std::string_view object);
  bool AddTriple(std::string_view subject, Relation relation,
                 std::string_view object);
  bool AddTriple(const Triple& t);

  size_t num_triples() const { return triples_.size(); }
  const std::vector<Triple>& triples() const { return triples_; }
  bool Contains(const Triple& t) const;

  // Sorted by entity id. Unknown ids yield an empty result.
  std::vector<EntityId> QueryObjects(EntityId subject, Relation r) const;
  std::vector<EntityId> QuerySubjects(Relation r, EntityId object) const;

  size_t num_facts() const { return facts_.size(); }
  const Fact& fact(FactId id) const { return facts_[id]; }
  std::string RenderFact(FactId id) const;
  std::string RenderTriple(const Triple& t) const;

  // Union of the postings of every token whose fact frequency is at most
  // freq_cutoff. Tokens are normalized surface forms. Sorted, unique.
  std::vector<FactId> HashLookup(std::span<const std::string> tokens,
                                 int freq_cutoff) const;
  // Number of facts containing the token (0 if unknown).
  int FactFrequency(std::string_view token) const;
  // Sorted fact ids for the token, or an empty span.
  std::span<const FactId> Postings(std::string_view token) const;
  size_t num_index_keys() const { return word_index_.size(); }

  void Freeze() { frozen_ = true; }
  bool frozen() const { return frozen_; }

  // Tab-separated triples file, one triple per line, '#' comments.
  static KnowledgeBase Load(const std::string& path);
  void Save(const std::string& path) const;

 private:
  struct StringHash {
    using is_transparent = void;
    size_t operator()(std::string_view s) const {
      return std::hash<std::string_view>{}(s);
    }
  };
  template <typename V>
  using StringMap =
      std::unordered_map<std::string, V, StringHash, std::equal_to<>>;

  static uint64_t PairKey(uint32_t a, Relation r) {
    return (static_cast<uint64_t>(a) << 8) | static_cast<uint8_t>(r);
  }
  static uint64_t TripleKey(const Triple& t) {
    return (static_cast<uint64_t>(t.subject) << 35) |
           (static_cast<uint64_t>(t.object) << 3) |
           static_cast<uint8_t>(t.relation);
  }

  void IndexWords(FactId fact, std::string_view surface);
  void AddPosting(std::string_view key, FactId fact);

  std::vector<std::string> names_;
  StringMap<EntityId> name_index_;
  std::vector<bool> is_movie_;

  std::vector<Triple> triples_;
  std::unordered_set<uint64_t> triple_set_;
  std::unordered_map<uint64_t, std::vector<EntityId>> forward_;
  std::unordered_map<uint64_t, std::vector<EntityId>> inverse_;

  std::vector<Fact> facts_;
  std::unordered_map<uint64_t, FactId> fact_of_pair_;
  StringMap<std::vector<FactId>> word_index_;

  bool frozen_ = false;
};

}  // namespace dialeval

#endif  // DIALEVAL_KB_KNOWLEDGE_BASE_H_
