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

#ifndef DIALEVAL_TEXT_VOCABULARY_H_
#define DIALEVAL_TEXT_VOCABULARY_H_

#include <cstdint>
#include <istream>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace dialeval {

using TokenId = int32_t;

// Reserved symbols. Every vocabulary starts with these two entries.
inline constexpr TokenId kNullToken = 0;
inline constexpr TokenId kUnkToken = 1;
inline constexpr std::string_view kNullSymbol = "<null>";
inline constexpr std::string_view kUnkSymbol = "<unk>";

// Lower-cases ASCII, maps every character that is not alphanumeric, '_' or
// part of a multi-byte UTF-8 sequence to a space, and collapses runs of
// whitespace. Entity names and running text go through the same function so
// that entity surface forms match inside sentences.
std::string NormalizeText(std::string_view text);

// Splits already-normalized text on single spaces.
std::vector<std::string_view> SplitWords(std::string_view normalized);

using TokenSeq = std::vector<TokenId>;

// Sparse multiset of token ids, kept sorted by id. NULL and UNK never
// appear in a bag.
class BagOfTokens {
 public:
  using Entry = std::pair<TokenId, int>;

  BagOfTokens() = default;

  void Add(TokenId id, int count = 1);
  void Merge(const BagOfTokens& other);

  int Count(TokenId id) const;
  bool empty() const { return entries_.empty(); }
  size_t size() const { return entries_.size(); }
  int total() const;

  const std::vector<Entry>& entries() const { return entries_; }
  auto begin() const { return entries_.begin(); }
  auto end() const { return entries_.end(); }

  bool operator==(const BagOfTokens&) const = default;

 private:
  std::vector<Entry> entries_;
};

// Counts the non-reserved ids of a token sequence.
BagOfTokens Bag(std::span<const TokenId> seq);

// Mixed entity / unigram symbol table with greedy longest-match
// tokenization. Immutable once built.
class Vocabulary {
 public:
  // Builds the table from a corpus of documents. All entity names are kept
  // regardless of frequency; the remaining unigrams (words not consumed by
  // an entity match) are kept when their count reaches min_freq. Ids are
  // assigned NULL, UNK, entities in the given order, then unigrams by
  // descending count with lexicographic tie-break.
  static Vocabulary Build(std::span<const std::string> corpus,
                          std::span<const std::string> entity_names,
                          int min_freq);
  static Vocabulary Build(std::istream& corpus,
                          std::span<const std::string> entity_names,
                          int min_freq);

  // One line per symbol: surface \t count \t E|U. Line number is the id.
  static Vocabulary Load(const std::string& path);
  void Save(const std::string& path) const;

  size_t size() const { return symbols_.size(); }
  const std::string& Symbol(TokenId id) const { return symbols_[id]; }
  bool IsEntity(TokenId id) const { return entity_flags_[id]; }
  int64_t Count(TokenId id) const { return counts_[id]; }
  const std::vector<TokenId>& entity_ids() const { return entity_ids_; }
  int max_ngram() const { return max_ngram_; }

  // Looks up an already-normalized surface form.
  std::optional<TokenId> Find(std::string_view normalized) const;
  // Normalizes, then looks up; falls back to UNK.
  TokenId Lookup(std::string_view text) const;

  TokenSeq Tokenize(std::string_view text) const;

  bool operator==(const Vocabulary& other) const;

 private:
  struct StringHash {
    using is_transparent = void;
    size_t operator()(std::string_view s) const {
      return std::hash<std::string_view>{}(s);
    }
  };

  TokenId Append(std::string symbol, int64_t count, bool entity);

  std::vector<std::string> symbols_;
  std::vector<bool> entity_flags_;
  std::vector<int64_t> counts_;
  std::vector<TokenId> entity_ids_;
  std::unordered_map<std::string, TokenId, StringHash, std::equal_to<>> index_;
  int max_ngram_ = 1;
};

}  // namespace dialeval

#endif  // DIALEVAL_TEXT_VOCABULARY_H_
