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

#ifndef DIALEVAL_TASKGEN_EXAMPLE_H_
#define DIALEVAL_TASKGEN_EXAMPLE_H_

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dialeval/kb/knowledge_base.h"

namespace dialeval {

enum class TaskTag : uint8_t { kQa, kRecs, kQaRecs, kDiscussion };
inline constexpr int kNumTasks = 4;
std::string_view TaskName(TaskTag t);
std::optional<TaskTag> ParseTask(std::string_view name);

// The eleven KB edge directions a factoid question can traverse.
enum class QuestionClass : uint8_t {
  kActorToMovie,
  kMovieToActors,
  kMovieToDirector,
  kDirectorToMovie,
  kMovieToWriter,
  kWriterToMovie,
  kMovieToTags,
  kTagToMovie,
  kMovieToYear,
  kMovieToGenre,
  kMovieToLanguage,
};
inline constexpr int kNumQuestionClasses = 11;

std::string_view QuestionClassName(QuestionClass c);  // "actor_to_movie"
std::string_view QuestionClassLabel(QuestionClass c);  // "actor to movie"
std::optional<QuestionClass> ParseQuestionClass(std::string_view name);

// Relation traversed by a class and whether it is walked object -> subject.
// Classes without a relation among the eight KB kinds return nullopt.
struct ClassEdge {
  Relation relation;
  bool inverse;
};
std::optional<ClassEdge> EdgeOf(QuestionClass c);

struct Turn {
  std::string user;
  std::string reply;
  bool operator==(const Turn&) const = default;
};

// Either rank every entity symbol, or rank an explicit list made of the gold
// response plus a shared negative pool (which never contains the gold).
struct CandidateSpec {
  enum class Kind : uint8_t { kAllEntities, kExplicitList };
  Kind kind = Kind::kAllEntities;
  std::string pool_name;  // "dev", "test", ... ; empty: gold only
  std::shared_ptr<const std::vector<std::string>> pool;

  static CandidateSpec AllEntities() { return {}; }
  static CandidateSpec Explicit(std::string name,
                                std::shared_ptr<const std::vector<std::string>> pool) {
    return {Kind::kExplicitList, std::move(name), std::move(pool)};
  }
  size_t pool_size() const { return pool ? pool->size() : 0; }

  bool operator==(const CandidateSpec& o) const {
    return kind == o.kind && pool_name == o.pool_name &&
           (pool == o.pool || (pool && o.pool && *pool == *o.pool));
  }
};

// One supervised exchange.
struct Example {
  std::vector<Turn> context;
  std::string input;
  std::vector<std::string> gold;  // entity names, or a single response text
  CandidateSpec candidates;
  TaskTag task = TaskTag::kQa;
  std::optional<QuestionClass> question_class;
  int response_position = 1;
  int64_t dialog_id = 0;

  bool operator==(const Example&) const = default;
};

// Text used when a gold answer set appears as a context reply.
std::string JoinAnswers(const std::vector<std::string>& answers);

}  // namespace dialeval

#endif  // DIALEVAL_TASKGEN_EXAMPLE_H_
