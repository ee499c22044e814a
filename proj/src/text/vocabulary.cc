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

#include "dialeval/text/vocabulary.h"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <sstream>

#include "dialeval/errors.h"

namespace dialeval {

namespace {

bool IsWordByte(unsigned char c) {
  return std::isalnum(c) || c == '_' || c >= 0x80;
}

// Greedy longest match of words[pos..] against a symbol table. Returns the
// number of words consumed and the id, or {0, -1} if nothing matches.
template <typename Index>
std::pair<int, TokenId> LongestMatch(const Index& index, int max_ngram,
                                     std::span<const std::string_view> words,
                                     size_t pos, std::string* buffer) {
  const int limit =
      static_cast<int>(std::min<size_t>(max_ngram, words.size() - pos));
  for (int n = limit; n >= 1; --n) {
    buffer->clear();
    for (int j = 0; j < n; ++j) {
      if (j > 0) buffer->push_back(' ');
      buffer->append(words[pos + j]);
    }
    auto it = index.find(std::string_view(*buffer));
    if (it != index.end()) return {n, it->second};
  }
  return {0, -1};
}

}  // namespace

std::string NormalizeText(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  bool pending_space = false;
  for (unsigned char c : text) {
    if (IsWordByte(c)) {
      if (pending_space && !out.empty()) out.push_back(' ');
      pending_space = false;
      out.push_back(static_cast<char>(std::tolower(c)));
    } else {
      pending_space = true;
    }
  }
  return out;
}

std::vector<std::string_view> SplitWords(std::string_view normalized) {
  std::vector<std::string_view> words;
  size_t start = 0;
  while (start < normalized.size()) {
    size_t end = normalized.find(' ', start);
    if (end == std::string_view::npos) end = normalized.size();
    if (end > start) words.push_back(normalized.substr(start, end - start));
    start = end + 1;
  }
  return words;
}

void BagOfTokens::Add(TokenId id, int count) {
  if (id == kNullToken || id == kUnkToken || count <= 0) return;
  auto it = std::lower_bound(
      entries_.begin(), entries_.end(), id,
      [](const Entry& e, TokenId value) { return e.first < value; });
  if (it != entries_.end() && it->first == id) {
    it->second += count;
  } else {
    entries_.insert(it, {id, count});
  }
}

void BagOfTokens::Merge(const BagOfTokens& other) {
  for (const auto& [id, count] : other.entries_) Add(id, count);
}

int BagOfTokens::Count(TokenId id) const {
  auto it = std::lower_bound(
      entries_.begin(), entries_.end(), id,
      [](const Entry& e, TokenId value) { return e.first < value; });
  return (it != entries_.end() && it->first == id) ? it->second : 0;
}

int BagOfTokens::total() const {
  int sum = 0;
  for (const auto& e : entries_) sum += e.second;
  return sum;
}

BagOfTokens Bag(std::span<const TokenId> seq) {
  BagOfTokens bag;
  for (TokenId id : seq) bag.Add(id);
  return bag;
}

TokenId Vocabulary::Append(std::string symbol, int64_t count, bool entity) {
  const TokenId id = static_cast<TokenId>(symbols_.size());
  const int words = static_cast<int>(SplitWords(symbol).size());
  max_ngram_ = std::max(max_ngram_, words);
  index_.emplace(symbol, id);
  symbols_.push_back(std::move(symbol));
  entity_flags_.push_back(entity);
  counts_.push_back(count);
  if (entity) entity_ids_.push_back(id);
  return id;
}

Vocabulary Vocabulary::Build(std::span<const std::string> corpus,
                             std::span<const std::string> entity_names,
                             int min_freq) {
  if (min_freq < 1) throw UsageError("min_freq must be >= 1");
  Vocabulary vocab;
  vocab.Append(std::string(kNullSymbol), 0, false);
  vocab.Append(std::string(kUnkSymbol), 0, false);

  for (const std::string& raw : entity_names) {
    std::string name = NormalizeText(raw);
    if (name.empty()) {
      throw DataError("entity name '" + raw + "' is empty after normalization");
    }
    if (vocab.index_.contains(name)) {
      throw DataError("duplicate entity name '" + name + "'");
    }
    vocab.Append(std::move(name), 0, true);
  }

  // Count entity occurrences and the words not covered by any entity.
  std::unordered_map<std::string, int64_t, StringHash, std::equal_to<>>
      unigram_counts;
  size_t total_words = 0;
  std::string buffer;
  for (const std::string& doc : corpus) {
    const std::string norm = NormalizeText(doc);
    const auto words = SplitWords(norm);
    total_words += words.size();
    size_t pos = 0;
    while (pos < words.size()) {
      auto [n, id] =
          LongestMatch(vocab.index_, vocab.max_ngram_, words, pos, &buffer);
      if (n > 0) {
        ++vocab.counts_[id];
        pos += n;
      } else {
        auto it = unigram_counts.find(words[pos]);
        if (it == unigram_counts.end()) {
          unigram_counts.emplace(std::string(words[pos]), 1);
        } else {
          ++it->second;
        }
        ++pos;
      }
    }
  }
  if (total_words == 0 && entity_names.empty()) {
    throw DataError("cannot build a vocabulary from an empty corpus without entities");
  }

  std::vector<std::pair<std::string, int64_t>> kept;
  for (auto& [word, count] : unigram_counts) {
    if (count >= min_freq && !vocab.index_.contains(word)) {
      kept.emplace_back(word, count);
    }
  }
  std::sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  for (auto& [word, count] : kept) vocab.Append(std::move(word), count, false);
  return vocab;
}

Vocabulary Vocabulary::Build(std::istream& corpus,
                             std::span<const std::string> entity_names,
                             int min_freq) {
  std::vector<std::string> docs;
  std::string line;
  while (std::getline(corpus, line)) docs.push_back(line);
  return Build(docs, entity_names, min_freq);
}

std::optional<TokenId> Vocabulary::Find(std::string_view normalized) const {
  auto it = index_.find(normalized);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

TokenId Vocabulary::Lookup(std::string_view text) const {
  return Find(NormalizeText(text)).value_or(kUnkToken);
}

TokenSeq Vocabulary::Tokenize(std::string_view text) const {
  const std::string norm = NormalizeText(text);
  const auto words = SplitWords(norm);
  TokenSeq out;
  out.reserve(words.size());
  std::string buffer;
  size_t pos = 0;
  while (pos < words.size()) {
    auto [n, id] = LongestMatch(index_, max_ngram_, words, pos, &buffer);
    if (n > 0) {
      out.push_back(id);
      pos += n;
    } else {
      out.push_back(kUnkToken);
      ++pos;
    }
  }
  return out;
}

void Vocabulary::Save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write vocabulary file " + path);
  for (size_t i = 0; i < symbols_.size(); ++i) {
    out << symbols_[i] << '\t' << counts_[i] << '\t'
        << (entity_flags_[i] ? 'E' : 'U') << '\n';
  }
}

Vocabulary Vocabulary::Load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open vocabulary file " + path);
  Vocabulary vocab;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const size_t t1 = line.find('\t');
    const size_t t2 = t1 == std::string::npos ? t1 : line.find('\t', t1 + 1);
    if (t2 == std::string::npos || line.size() != t2 + 2 ||
        (line[t2 + 1] != 'E' && line[t2 + 1] != 'U')) {
      throw DataError(path + ":" + std::to_string(line_no) +
                      ": malformed vocabulary line");
    }
    std::string symbol = line.substr(0, t1);
    int64_t count = 0;
    try {
      count = std::stoll(line.substr(t1 + 1, t2 - t1 - 1));
    } catch (const std::exception&) {
      throw DataError(path + ":" + std::to_string(line_no) + ": bad count");
    }
    if (vocab.index_.contains(symbol)) {
      throw DataError(path + ":" + std::to_string(line_no) +
                      ": duplicate symbol '" + symbol + "'");
    }
    vocab.Append(std::move(symbol), count, line[t2 + 1] == 'E');
  }
  if (vocab.size() < 2 || vocab.symbols_[kNullToken] != kNullSymbol ||
      vocab.symbols_[kUnkToken] != kUnkSymbol) {
    throw DataError(path + ": vocabulary must start with <null> and <unk>");
  }
  return vocab;
}

bool Vocabulary::operator==(const Vocabulary& other) const {
  return symbols_ == other.symbols_ && entity_flags_ == other.entity_flags_ &&
         counts_ == other.counts_;
}

}  // namespace dialeval
