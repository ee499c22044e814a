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
#include <array>
#include <random>
#include <set>
#include <unordered_set>

#include "dialeval/errors.h"
#include "dialeval/ingest/sources.h"

namespace dialeval {

namespace {

constexpr std::array<std::string_view, 24> kSyllables = {
    "ka", "lo", "mi", "ren", "tal", "vo", "sha", "dor", "pel", "qui", "zan", "bri",
    "mor", "fen", "gal", "hix", "jun", "nev", "ost", "rud", "sil", "tov", "wex", "yar"};

constexpr std::array<std::string_view, 12> kGenres = {
    "comedy",  "drama",  "action",  "thriller", "crime",   "fantasy",
    "musical", "horror", "romance", "western",  "animation", "documentary"};

constexpr std::array<std::string_view, 32> kTags = {
    "martial arts", "time travel", "space",      "heist",       "zombies",
    "robots",       "high school", "road trip",  "revenge",     "music",
    "dragons",      "spies",       "boxing",     "pirates",     "vampires",
    "cooking",      "surfing",     "chess",      "aliens",      "submarine",
    "courtroom",    "dinosaurs",   "magic",      "detective",   "ghosts",
    "circus",       "mountains",   "jazz",       "open source", "soccer",
    "wizards",      "samurai"};

constexpr std::array<std::string_view, 3> kRatingBuckets = {
    "poorly rated", "decently rated", "highly rated"};
constexpr std::array<std::string_view, 3> kVoteBuckets = {"obscure", "popular",
                                                          "famous"};

constexpr std::array<std::string_view, 6> kOpeners = {
    "i just watched {M} last night and really enjoyed it",
    "has anyone seen {M} ? what did you think of it",
    "what do you all think of {G} movies like {M}",
    "honestly i think {M} is overrated",
    "i finally got around to {M} this weekend",
    "is {M} worth watching for a {G} fan"};
constexpr std::array<std::string_view, 4> kOpenersPlain = {
    "what is the best movie you saw this year",
    "looking for something fun to watch tonight",
    "which film made you cry the most",
    "what movie do you rewatch every winter"};
constexpr std::array<std::string_view, 6> kReplies = {
    "if you liked that you will love {X}",
    "{X} is great , you should check it out",
    "i prefer {X} , the {G} scenes are much better",
    "{X} was the real highlight for me",
    "watch {X} next , same vibe",
    "totally agree , {X} nailed it"};
constexpr std::array<std::string_view, 5> kRepliesPlain = {
    "i did not like it at all to be honest",
    "totally agree with you on that one",
    "the ending was way too slow for me",
    "great soundtrack but a weak story",
    "never seen it but my friends love it"};

class Generator {
 public:
  explicit Generator(const SyntheticConfig& c) : config_(c), rng_(c.seed) {}

  SyntheticSources Run() {
    if (config_.n_movies < 1 || config_.n_people < 1 || config_.n_users < 1 ||
        config_.n_threads < 1) {
      throw UsageError("synthetic source sizes must be >= 1");
    }
    SyntheticSources out;
    BuildKb(&out.kb);
    out.ratings = BuildRatings(out.kb);
    out.thread_records = BuildThreads(out.kb);
    out.threads = FlattenThreads(out.thread_records);
    return out;
  }

 private:
  int Uniform(int lo, int hi) {  // inclusive
    return std::uniform_int_distribution<int>(lo, hi)(rng_);
  }
  bool Coin(double p) { return std::uniform_real_distribution<double>(0, 1)(rng_) < p; }
  template <typename C>
  const auto& Pick(const C& c) {
    return c[static_cast<size_t>(Uniform(0, static_cast<int>(c.size()) - 1))];
  }

  std::string FreshWord() {
    while (true) {
      std::string w;
      const int n = Uniform(2, 3);
      for (int i = 0; i < n; ++i) w += Pick(kSyllables);
      if (used_words_.insert(w).second) return w;
    }
  }

  std::string FreshName(int min_words, int max_words) {
    while (true) {
      const int n = Uniform(min_words, max_words);
      std::string name;
      for (int i = 0; i < n; ++i) {
        if (i > 0) name += ' ';
        name += FreshWord();
      }
      if (used_names_.insert(name).second) return name;
    }
  }

  void BuildKb(KnowledgeBase* kb) {
    for (int i = 0; i < config_.n_people; ++i) people_.push_back(FreshName(2, 2));
    const int n_directors = std::max(1, config_.n_people / 5);
    for (int i = 0; i < config_.n_movies; ++i) {
      std::string title = FreshName(1, 2);
      if (Coin(0.25)) title = "the " + title;
      movies_.push_back(title);
    }
    for (const std::string& m : movies_) {
      const std::string& director = people_[Uniform(0, n_directors - 1)];
      kb->AddTriple(m, Relation::kDirectedBy, director);
      kb->AddTriple(m, Relation::kWrittenBy,
                    Coin(0.5) ? director : Pick(people_));
      if (Coin(0.3)) kb->AddTriple(m, Relation::kWrittenBy, Pick(people_));
      const int n_actors = Uniform(2, 4);
      for (int a = 0; a < n_actors; ++a) {
        kb->AddTriple(m, Relation::kStarredActors, Pick(people_));
      }
      kb->AddTriple(m, Relation::kReleaseYear, std::to_string(Uniform(1960, 2015)));
      const int n_genres = Uniform(1, 2);
      for (int g = 0; g < n_genres; ++g) {
        kb->AddTriple(m, Relation::kHasGenre, Pick(kGenres));
      }
      const int n_tags = Uniform(1, 4);
      for (int t = 0; t < n_tags; ++t) {
        kb->AddTriple(m, Relation::kHasTags, Pick(kTags));
      }
      kb->AddTriple(m, Relation::kHasImdbRating, Pick(kRatingBuckets));
      kb->AddTriple(m, Relation::kHasImdbVotes, Pick(kVoteBuckets));
    }
  }

  Ratings BuildRatings(const KnowledgeBase& kb) {
    const std::vector<EntityId> movies = kb.Movies();
    std::vector<std::vector<EntityId>> by_genre(kGenres.size());
    for (EntityId m : movies) {
      for (size_t g = 0; g < kGenres.size(); ++g) {
        auto gid = kb.FindEntity(kGenres[g]);
        if (!gid) continue;
        auto genres = kb.QueryObjects(m, Relation::kHasGenre);
        if (std::binary_search(genres.begin(), genres.end(), *gid)) {
          by_genre[g].push_back(m);
        }
      }
    }

    Ratings ratings;
    std::vector<int> per_movie(kb.num_entities(), 0);
    const int n_movies = static_cast<int>(movies.size());
    for (int u = 0; u < config_.n_users; ++u) {
      const UserId user = ratings.AddUser("user" + std::to_string(u + 1));
      std::vector<size_t> favourites = {static_cast<size_t>(Uniform(0, kGenres.size() - 1))};
      if (Coin(0.5)) favourites.push_back(static_cast<size_t>(Uniform(0, kGenres.size() - 1)));

      const int n_five = std::min(n_movies, Uniform(9, 15));
      std::set<EntityId> rated;
      int guard = 0;
      while (static_cast<int>(rated.size()) < n_five) {
        EntityId m;
        const auto& pool = by_genre[favourites[Uniform(0, favourites.size() - 1)]];
        if (!pool.empty() && Coin(0.8) && guard < 1000) {
          m = Pick(pool);
        } else {
          m = Pick(movies);
        }
        ++guard;
        if (rated.insert(m).second) {
          ratings.Set(user, m, 5);
          ++per_movie[m];
        }
      }
      const int n_other = std::min(n_movies - n_five, Uniform(5, 10));
      int placed = 0;
      while (placed < n_other) {
        const EntityId m = Pick(movies);
        if (!rated.insert(m).second) continue;
        ratings.Set(user, m, Uniform(1, 4));
        ++per_movie[m];
        ++placed;
      }
    }
    // Top up movies below two ratings from users that have not rated them.
    if (config_.n_users >= 2) {
      for (EntityId m : movies) {
        int guard = 0;
        while (per_movie[m] < 2 && guard++ < 10 * config_.n_users) {
          const UserId u = Uniform(0, config_.n_users - 1);
          const auto& rs = ratings.user_ratings(u);
          const bool seen = std::any_of(rs.begin(), rs.end(),
                                        [m](const Rating& r) { return r.movie == m; });
          if (seen) continue;
          ratings.Set(u, m, Uniform(2, 4));
          ++per_movie[m];
        }
      }
    }
    return FilterRatings(ratings, kb);
  }

  static std::string Fill(std::string_view pattern, std::string_view m,
                          std::string_view g, std::string_view x) {
    std::string out;
    for (size_t i = 0; i < pattern.size(); ++i) {
      if (pattern.compare(i, 3, "{M}") == 0) {
        out += m;
        i += 2;
      } else if (pattern.compare(i, 3, "{G}") == 0) {
        out += g;
        i += 2;
      } else if (pattern.compare(i, 3, "{X}") == 0) {
        out += x;
        i += 2;
      } else {
        out += pattern[i];
      }
    }
    return out;
  }

  // An entity related to `movie`: its director, an actor, or another movie
  // sharing a genre.
  std::string Related(const KnowledgeBase& kb, EntityId movie) {
    switch (Uniform(0, 2)) {
      case 0:
        return kb.EntityName(Pick(kb.QueryObjects(movie, Relation::kDirectedBy)));
      case 1:
        return kb.EntityName(Pick(kb.QueryObjects(movie, Relation::kStarredActors)));
      default: {
        const EntityId genre = Pick(kb.QueryObjects(movie, Relation::kHasGenre));
        return kb.EntityName(Pick(kb.QuerySubjects(Relation::kHasGenre, genre)));
      }
    }
  }

  std::string GenreOf(const KnowledgeBase& kb, EntityId movie) {
    return kb.EntityName(Pick(kb.QueryObjects(movie, Relation::kHasGenre)));
  }

  std::string Opener(const KnowledgeBase& kb, EntityId movie) {
    if (!Coin(config_.mention_prob)) return std::string(Pick(kOpenersPlain));
    return Fill(Pick(kOpeners), kb.EntityName(movie), GenreOf(kb, movie), "");
  }

  std::string Reply(const KnowledgeBase& kb, EntityId movie) {
    if (!Coin(config_.mention_prob)) return std::string(Pick(kRepliesPlain));
    return Fill(Pick(kReplies), "", GenreOf(kb, movie), Related(kb, movie));
  }

  std::vector<ThreadRecord> BuildThreads(const KnowledgeBase& kb) {
    const std::vector<EntityId> movies = kb.Movies();
    std::vector<ThreadRecord> records;
    int64_t next_id = 1;
    for (int t = 0; t < config_.n_threads; ++t) {
      const double r = std::uniform_real_distribution<double>(0, 1)(rng_);
      const int exchanges = r < 0.76 ? 1 : (r < 0.93 ? 2 : Uniform(3, 5));
      EntityId topic = Pick(movies);
      std::optional<int64_t> parent;
      for (int p = 0; p < 2 * exchanges; ++p) {
        ThreadRecord rec;
        rec.id = next_id++;
        rec.parent_id = parent;
        rec.body = (p % 2 == 0) ? Opener(kb, topic) : Reply(kb, topic);
        const int64_t chain_id = rec.id;
        records.push_back(std::move(rec));
        // Later siblings never win the first-reply rule; they feed the
        // negative candidate pool.
        if (parent) {
          const int siblings = Uniform(0, 2);
          for (int s = 0; s < siblings; ++s) {
            ThreadRecord sib;
            sib.id = next_id++;
            sib.parent_id = parent;
            sib.body = Reply(kb, Pick(movies));
            records.push_back(std::move(sib));
          }
        }
        parent = chain_id;
        if (p % 2 == 1 && Coin(0.5)) topic = Pick(movies);
      }
    }
    return records;
  }

  SyntheticConfig config_;
  std::mt19937_64 rng_;
  std::unordered_set<std::string> used_words_;
  std::unordered_set<std::string> used_names_;
  std::vector<std::string> people_;
  std::vector<std::string> movies_;
};

}  // namespace

SyntheticSources GenerateSyntheticSources(const SyntheticConfig& config) {
  return Generator(config).Run();
}

}  // namespace dialeval
