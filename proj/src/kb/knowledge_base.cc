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

#include "dialeval/kb/knowledge_base.h"

#include <algorithm>
#include <fstream>

#include "dialeval/errors.h"
#include "dialeval/text/vocabulary.h"

namespace dialeval {

namespace {

constexpr std::array<std::string_view, kNumRelations> kRelationNames = {
    "directed_by", "written_by", "starred_actors",  "release_year",
    "has_genre",   "has_tags",   "has_imdb_rating", "has_imdb_votes",
};

void InsertSorted(std::vector<int32_t>* v, int32_t value) {
  auto it = std::lower_bound(v->begin(), v->end(), value);
  if (it == v->end() || *it != value) v->insert(it, value);
}

}  // namespace

std::string_view RelationName(Relation r) {
  return kRelationNames[static_cast<size_t>(r)];
}

std::optional<Relation> ParseRelation(std::string_view name) {
  for (size_t i = 0; i < kRelationNames.size(); ++i) {
    if (kRelationNames[i] == name) return static_cast<Relation>(i);
  }
  if (name == "starred_actor") return Relation::kStarredActors;
  if (name == "has_tag") return Relation::kHasTags;
  return std::nullopt;
}

EntityId KnowledgeBase::Intern(std::string_view name) {
  std::string norm = NormalizeText(name);
  if (norm.empty()) {
    throw DataError("empty entity name '" + std::string(name) + "'");
  }
  auto it = name_index_.find(norm);
  if (it != name_index_.end()) return it->second;
  if (frozen_) throw Error("knowledge base is frozen");
  const EntityId id = static_cast<EntityId>(names_.size());
  name_index_.emplace(norm, id);
  names_.push_back(std::move(norm));
  is_movie_.push_back(false);
  return id;
}

std::optional<EntityId> KnowledgeBase::FindEntity(std::string_view name) const {
  auto it = name_index_.find(NormalizeText(name));
  if (it == name_index_.end()) return std::nullopt;
  return it->second;
}

bool KnowledgeBase::IsMovie(EntityId id) const {
  return id >= 0 && static_cast<size_t>(id) < is_movie_.size() && is_movie_[id];
}

std::vector<EntityId> KnowledgeBase::Movies() const {
  std::vector<EntityId> out;
  for (size_t i = 0; i < is_movie_.size(); ++i) {
    if (is_movie_[i]) out.push_back(static_cast<EntityId>(i));
  }
  return out;
}

bool KnowledgeBase::AddTriple(std::string_view subject,
                              std::string_view relation,
                              std::string_view object) {
  auto r = ParseRelation(relation);
  if (!r) {
    throw DataError("unknown relation '" + std::string(relation) + "'");
  }
  return AddTriple(subject, *r, object);
}

bool KnowledgeBase::AddTriple(std::string_view subject, Relation relation,
                              std::string_view object) {
  const EntityId s = Intern(subject);
  const EntityId o = Intern(object);
  return AddTriple(Triple{s, relation, o});
}

bool KnowledgeBase::AddTriple(const Triple& t) {
  if (t.subject < 0 || t.object < 0 ||
      static_cast<size_t>(t.subject) >= names_.size() ||
      static_cast<size_t>(t.object) >= names_.size()) {
    throw DataError("triple references an unknown entity id");
  }
  if (triple_set_.contains(TripleKey(t))) return false;
  if (frozen_) throw Error("knowledge base is frozen");

  triple_set_.insert(TripleKey(t));
  triples_.push_back(t);
  is_movie_[t.subject] = true;
  InsertSorted(&forward_[PairKey(t.subject, t.relation)], t.object);
  InsertSorted(&inverse_[PairKey(t.object, t.relation)], t.subject);

  const uint64_t pair = PairKey(t.subject, t.relation);
  FactId fact_id;
  auto it = fact_of_pair_.find(pair);
  if (it == fact_of_pair_.end()) {
    fact_id = static_cast<FactId>(facts_.size());
    fact_of_pair_.emplace(pair, fact_id);
    facts_.push_back(Fact{t.subject, t.relation, {}});
    IndexWords(fact_id, names_[t.subject]);
    AddPosting(RelationName(t.relation), fact_id);
  } else {
    fact_id = it->second;
  }
  facts_[fact_id].objects.push_back(t.object);
  IndexWords(fact_id, names_[t.object]);
  return true;
}

bool KnowledgeBase::Contains(const Triple& t) const {
  return triple_set_.contains(TripleKey(t));
}

void KnowledgeBase::IndexWords(FactId fact, std::string_view surface) {
  AddPosting(surface, fact);
  const auto words = SplitWords(surface);
  if (words.size() > 1) {
    for (std::string_view w : words) AddPosting(w, fact);
  }
}

void KnowledgeBase::AddPosting(std::string_view key, FactId fact) {
  auto it = word_index_.find(key);
  if (it == word_index_.end()) {
    it = word_index_.emplace(std::string(key), std::vector<FactId>{}).first;
  }
  InsertSorted(&it->second, fact);
}

std::vector<EntityId> KnowledgeBase::QueryObjects(EntityId subject,
                                                  Relation r) const {
  if (subject < 0) return {};
  auto it = forward_.find(PairKey(subject, r));
  return it == forward_.end() ? std::vector<EntityId>{} : it->second;
}

std::vector<EntityId> KnowledgeBase::QuerySubjects(Relation r,
                                                   EntityId object) const {
  if (object < 0) return {};
  auto it = inverse_.find(PairKey(object, r));
  return it == inverse_.end() ? std::vector<EntityId>{} : it->second;
}

std::string KnowledgeBase::RenderFact(FactId id) const {
  const Fact& f = facts_[id];
  std::string out = names_[f.subject];
  out += ' ';
  out += RelationName(f.relation);
  out += ' ';
  for (size_t i = 0; i < f.objects.size(); ++i) {
    if (i > 0) out += ", ";
    out += names_[f.objects[i]];
  }
  return out;
}

std::string KnowledgeBase::RenderTriple(const Triple& t) const {
  std::string out = names_[t.subject];
  out += ' ';
  out += RelationName(t.relation);
  out += ' ';
  out += names_[t.object];
  return out;
}

std::vector<FactId> KnowledgeBase::HashLookup(
    std::span<const std::string> tokens, int freq_cutoff) const {
  std::vector<FactId> out;
  for (const std::string& token : tokens) {
    auto it = word_index_.find(std::string_view(token));
    if (it == word_index_.end()) continue;
    if (static_cast<int64_t>(it->second.size()) > freq_cutoff) continue;
    std::vector<FactId> merged;
    merged.reserve(out.size() + it->second.size());
    std::set_union(out.begin(), out.end(), it->second.begin(),
                   it->second.end(), std::back_inserter(merged));
    out.swap(merged);
  }
  return out;
}

int KnowledgeBase::FactFrequency(std::string_view token) const {
  auto it = word_index_.find(token);
  return it == word_index_.end() ? 0 : static_cast<int>(it->second.size());
}

std::span<const FactId> KnowledgeBase::Postings(std::string_view token) const {
  auto it = word_index_.find(token);
  if (it == word_index_.end()) return {};
  return it->second;
}

KnowledgeBase KnowledgeBase::Load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open triples file " + path);
  KnowledgeBase kb;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const size_t t1 = line.find('\t');
    const size_t t2 = t1 == std::string::npos ? t1 : line.find('\t', t1 + 1);
    if (t2 == std::string::npos || line.find('\t', t2 + 1) != std::string::npos) {
      throw DataError(path + ":" + std::to_string(line_no) +
                      ": expected exactly two tab separators");
    }
    const std::string_view view(line);
    try {
      kb.AddTriple(view.substr(0, t1), view.substr(t1 + 1, t2 - t1 - 1),
                   view.substr(t2 + 1));
    } catch (const DataError& e) {
      throw DataError(path + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return kb;
}

void KnowledgeBase::Save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write triples file " + path);
  for (const Triple& t : triples_) {
    out << names_[t.subject] << '\t' << RelationName(t.relation) << '\t'
        << names_[t.object] << '\n';
  }
}

}  // namespace dialeval
