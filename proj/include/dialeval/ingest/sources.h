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

#ifndef DIALEVAL_INGEST_SOURCES_H_
#define DIALEVAL_INGEST_SOURCES_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dialeval/kb/knowledge_base.h"

namespace dialeval {

using UserId = int32_t;

struct Rating {
  EntityId movie = 0;
  int value = 0;
  bool operator==(const Rating&) const = default;
};

// Sparse user x movie matrix of 1..5 ratings. Users are compacted to dense
// ids in order of first appearance; per-user ratings are sorted by movie.
class Ratings {
 public:
  UserId AddUser(const std::string& name);
  // Replaces an existing rating for the same (user, movie).
  void Set(UserId user, EntityId movie, int value);

  size_t num_users() const { return users_.size(); }
  const std::string& user_name(UserId u) const { return users_[u]; }
  const std::vector<Rating>& user_ratings(UserId u) const { return by_user_[u]; }
  std::vector<EntityId> FiveStar(UserId u) const;
  size_t num_ratings() const;
  // Distinct rated movies, sorted.
  std::vector<EntityId> Movies() const;

  bool operator==(const Ratings&) const = default;

 private:
  std::vector<std::string> users_;
  std::vector<std::vector<Rating>> by_user_;
};

struct RatingsLoadStats {
  int64_t unknown_movie_ratings = 0;  // dropped: movie not in the KB
  int64_t sparse_movie_ratings = 0;   // dropped: movie with < 2 ratings
  int64_t dropped_movies = 0;
};

// File format: user \t movie \t rating. Ratings outside 1..5 raise a
// DataError naming the line.
Ratings LoadRatings(const std::string& path, const KnowledgeBase& kb,
                    RatingsLoadStats* stats = nullptr);
void SaveRatings(const Ratings& ratings, const KnowledgeBase& kb,
                 const std::string& path);
// Drops movies that are not KB movies or have fewer than 2 ratings, then
// recompacts users (users left without ratings are removed).
Ratings FilterRatings(const Ratings& raw, const KnowledgeBase& kb,
                      RatingsLoadStats* stats = nullptr);

// One discussion record, as stored in the threads file.
struct ThreadRecord {
  int64_t id = 0;
  std::optional<int64_t> parent_id;
  std::string body;
  bool operator==(const ThreadRecord&) const = default;
};

struct Exchange {
  std::string post;
  std::string reply;
  bool operator==(const Exchange&) const = default;
};

struct ThreadDialog {
  int64_t root_id = 0;
  std::vector<Exchange> exchanges;
  bool operator==(const ThreadDialog&) const = default;
};

// Two-party dialogs flattened from reply trees, plus the comments that were
// not used in any dialog (the pool negatives are drawn from).
struct ThreadCorpus {
  std::vector<ThreadDialog> dialogs;
  std::vector<std::string> candidate_pool;
  bool operator==(const ThreadCorpus&) const = default;
};

// JSON object per line: {"id": int, "parent_id": int|null, "body": string}.
std::vector<ThreadRecord> ReadThreadRecords(const std::string& path);
void WriteThreadRecords(const std::vector<ThreadRecord>& records,
                        const std::string& path);

// Starting at every root, follows the first reply (smallest child id) and
// pairs consecutive posts into exchanges (A,B),(C,D),... A trailing unpaired
// post is dropped, as are roots without replies. Bodies are sanitized so
// they contain no tabs, newlines or '|'. Throws DataError on a parent cycle.
ThreadCorpus FlattenThreads(const std::vector<ThreadRecord>& records);
ThreadCorpus LoadThreads(const std::string& path);

// Replaces tabs, newlines and '|' with spaces and trims.
std::string SanitizeUtterance(std::string_view text);

struct SyntheticConfig {
  uint64_t seed = 1;
  int n_movies = 100;
  int n_people = 150;
  int n_users = 200;
  int n_threads = 500;
  double mention_prob = 0.8;
};

struct SyntheticSources {
  KnowledgeBase kb;
  Ratings ratings;
  std::vector<ThreadRecord> thread_records;
  ThreadCorpus threads;
};

// Desk-scale stand-in for the movie database, the ratings matrix and the
// discussion dump. Deterministic in the seed. Every movie has all eight
// relations; every user has at least min(9, n_movies) five-star movies.
SyntheticSources GenerateSyntheticSources(const SyntheticConfig& config);

}  // namespace dialeval

#endif  // DIALEVAL_INGEST_SOURCES_H_
