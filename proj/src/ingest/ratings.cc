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

#include <algorithm>
#include <fstream>
#include <map>
#include <unordered_map>

#include "dialeval/errors.h"
#include "dialeval/ingest/sources.h"

namespace dialeval {

UserId Ratings::AddUser(const std::string& name) {
  users_.push_back(name);
  by_user_.emplace_back();
  return static_cast<UserId>(users_.size() - 1);
}

void Ratings::Set(UserId user, EntityId movie, int value) {
  if (value < 1 || value > 5) {
    throw DataError("rating " + std::to_string(value) + " outside 1..5");
  }
  auto& v = by_user_.at(user);
  auto it = std::lower_bound(
      v.begin(), v.end(), movie,
      [](const Rating& r, EntityId m) { return r.movie < m; });
  if (it != v.end() && it->movie == movie) {
    it->value = value;
  } else {
    v.insert(it, Rating{movie, value});
  }
}

std::vector<EntityId> Ratings::FiveStar(UserId u) const {
  std::vector<EntityId> out;
  for (const Rating& r : by_user_[u]) {
    if (r.value == 5) out.push_back(r.movie);
  }
  return out;
}

size_t Ratings::num_ratings() const {
  size_t n = 0;
  for (const auto& v : by_user_) n += v.size();
  return n;
}

std::vector<EntityId> Ratings::Movies() const {
  std::vector<EntityId> out;
  for (const auto& v : by_user_) {
    for (const Rating& r : v) out.push_back(r.movie);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

Ratings FilterRatings(const Ratings& raw, const KnowledgeBase& kb,
                      RatingsLoadStats* stats) {
  RatingsLoadStats local;
  std::map<EntityId, int> per_movie;
  for (UserId u = 0; u < static_cast<UserId>(raw.num_users()); ++u) {
    for (const Rating& r : raw.user_ratings(u)) {
      if (kb.IsMovie(r.movie)) {
        ++per_movie[r.movie];
      } else {
        ++local.unknown_movie_ratings;
      }
    }
  }
  for (const auto& [movie, count] : per_movie) {
    if (count < 2) {
      ++local.dropped_movies;
      local.sparse_movie_ratings += count;
    }
  }
  Ratings out;
  for (UserId u = 0; u < static_cast<UserId>(raw.num_users()); ++u) {
    std::optional<UserId> kept;
    for (const Rating& r : raw.user_ratings(u)) {
      if (!kb.IsMovie(r.movie) || per_movie[r.movie] < 2) continue;
      if (!kept) kept = out.AddUser(raw.user_name(u));
      out.Set(*kept, r.movie, r.value);
    }
  }
  if (stats) *stats = local;
  return out;
}

Ratings LoadRatings(const std::string& path, const KnowledgeBase& kb,
                    RatingsLoadStats* stats) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open ratings file " + path);
  Ratings raw;
  std::unordered_map<std::string, UserId> user_ids;
  int64_t unknown = 0;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const size_t t1 = line.find('\t');
    const size_t t2 = t1 == std::string::npos ? t1 : line.find('\t', t1 + 1);
    const std::string where = path + ":" + std::to_string(line_no);
    if (t2 == std::string::npos) {
      throw DataError(where + ": expected user \\t movie \\t rating");
    }
    const std::string rating_text = line.substr(t2 + 1);
    int value = 0;
    size_t consumed = 0;
    try {
      value = std::stoi(rating_text, &consumed);
    } catch (const std::exception&) {
      throw DataError(where + ": rating '" + rating_text + "' is not an integer");
    }
    if (consumed != rating_text.size() || value < 1 || value > 5) {
      throw DataError(where + ": rating '" + rating_text + "' outside 1..5");
    }
    auto movie = kb.FindEntity(std::string_view(line).substr(t1 + 1, t2 - t1 - 1));
    if (!movie || !kb.IsMovie(*movie)) {
      ++unknown;
      continue;
    }
    const std::string user = line.substr(0, t1);
    auto it = user_ids.find(user);
    if (it == user_ids.end()) it = user_ids.emplace(user, raw.AddUser(user)).first;
    raw.Set(it->second, *movie, value);
  }
  Ratings out = FilterRatings(raw, kb, stats);
  if (stats) stats->unknown_movie_ratings += unknown;
  return out;
}

void SaveRatings(const Ratings& ratings, const KnowledgeBase& kb,
                 const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write ratings file " + path);
  for (UserId u = 0; u < static_cast<UserId>(ratings.num_users()); ++u) {
    for (const Rating& r : ratings.user_ratings(u)) {
      out << ratings.user_name(u) << '\t' << kb.EntityName(r.movie) << '\t'
          << r.value << '\n';
    }
  }
}

}  // namespace dialeval
