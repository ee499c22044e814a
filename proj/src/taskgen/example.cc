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

#include "dialeval/taskgen/example.h"

namespace dialeval {

namespace {

constexpr std::array<std::string_view, kNumTasks> kTaskNames = {
    "qa", "recs", "qarecs", "discussion"};

constexpr std::array<std::string_view, kNumQuestionClasses> kClassNames = {
    "actor_to_movie",  "movie_to_actors", "movie_to_director",
    "director_to_movie", "movie_to_writer", "writer_to_movie",
    "movie_to_tags",   "tag_to_movie",    "movie_to_year",
    "movie_to_genre",  "movie_to_language"};

constexpr std::array<std::string_view, kNumQuestionClasses> kClassLabels = {
    "actor to movie",  "movie to actors", "movie to director",
    "director to movie", "movie to writer", "writer to movie",
    "movie to tags",   "tag to movie",    "movie to year",
    "movie to genre",  "movie to language"};

}  // namespace

std::string_view TaskName(TaskTag t) { return kTaskNames[static_cast<size_t>(t)]; }

std::optional<TaskTag> ParseTask(std::string_view name) {
  for (size_t i = 0; i < kTaskNames.size(); ++i) {
    if (kTaskNames[i] == name) return static_cast<TaskTag>(i);
  }
  return std::nullopt;
}

std::string_view QuestionClassName(QuestionClass c) {
  return kClassNames[static_cast<size_t>(c)];
}

std::string_view QuestionClassLabel(QuestionClass c) {
  return kClassLabels[static_cast<size_t>(c)];
}

std::optional<QuestionClass> ParseQuestionClass(std::string_view name) {
  for (size_t i = 0; i < kClassNames.size(); ++i) {
    if (kClassNames[i] == name) return static_cast<QuestionClass>(i);
  }
  return std::nullopt;
}

std::optional<ClassEdge> EdgeOf(QuestionClass c) {
  switch (c) {
    case QuestionClass::kActorToMovie:
      return ClassEdge{Relation::kStarredActors, true};
    case QuestionClass::kMovieToActors:
      return ClassEdge{Relation::kStarredActors, false};
    case QuestionClass::kMovieToDirector:
      return ClassEdge{Relation::kDirectedBy, false};
    case QuestionClass::kDirectorToMovie:
      return ClassEdge{Relation::kDirectedBy, true};
    case QuestionClass::kMovieToWriter:
      return ClassEdge{Relation::kWrittenBy, false};
    case QuestionClass::kWriterToMovie:
      return ClassEdge{Relation::kWrittenBy, true};
    case QuestionClass::kMovieToTags:
      return ClassEdge{Relation::kHasTags, false};
    case QuestionClass::kTagToMovie:
      return ClassEdge{Relation::kHasTags, true};
    case QuestionClass::kMovieToYear:
      return ClassEdge{Relation::kReleaseYear, false};
    case QuestionClass::kMovieToGenre:
      return ClassEdge{Relation::kHasGenre, false};
    case QuestionClass::kMovieToLanguage:
      // None of the eight relation kinds records a language.
      return std::nullopt;
  }
  return std::nullopt;
}

std::string JoinAnswers(const std::vector<std::string>& answers) {
  std::string out;
  for (size_t i = 0; i < answers.size(); ++i) {
    if (i > 0) out += ", ";
    out += answers[i];
  }
  return out;
}

}  // namespace dialeval
