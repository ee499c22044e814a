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

#ifndef DIALEVAL_TESTS_TEST_UTIL_H_
#define DIALEVAL_TESTS_TEST_UTIL_H_

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "dialeval/kb/knowledge_base.h"

namespace dialeval::testing {

// Knowledge about Stephen Chow movies:
// 19 facts over four movies, 15 of them mentioning Stephen Chow.
inline KnowledgeBase ChowKb() {
  KnowledgeBase kb;
  const char* triples[][3] = {
      {"Shaolin Soccer", "directed_by", "Stephen Chow"},
      {"Shaolin Soccer", "written_by", "Stephen Chow"},
      {"Shaolin Soccer", "starred_actors", "Stephen Chow"},
      {"Shaolin Soccer", "release_year", "2001"},
      {"Shaolin Soccer", "has_genre", "comedy"},
      {"Shaolin Soccer", "has_tags", "martial arts"},
      {"Shaolin Soccer", "has_tags", "kung fu soccer"},
      {"Shaolin Soccer", "has_tags", "stephen chow"},
      {"Kung Fu Hustle", "directed_by", "Stephen Chow"},
      {"Kung Fu Hustle", "written_by", "Stephen Chow"},
      {"Kung Fu Hustle", "starred_actors", "Stephen Chow"},
      {"Kung Fu Hustle", "has_genre", "comedy action"},
      {"Kung Fu Hustle", "has_imdb_votes", "famous"},
      {"Kung Fu Hustle", "has_tags", "comedy"},
      {"Kung Fu Hustle", "has_tags", "action"},
      {"Kung Fu Hustle", "has_tags", "martial arts"},
      {"Kung Fu Hustle", "has_tags", "kung fu"},
      {"Kung Fu Hustle", "has_tags", "china"},
      {"Kung Fu Hustle", "has_tags", "soccer"},
      {"Kung Fu Hustle", "has_tags", "hong kong"},
      {"Kung Fu Hustle", "has_tags", "stephen chow"},
      {"The God of Cookery", "directed_by", "Stephen Chow"},
      {"The God of Cookery", "written_by", "Stephen Chow"},
      {"The God of Cookery", "starred_actors", "Stephen Chow"},
      {"The God of Cookery", "has_tags", "hong kong"},
      {"The God of Cookery", "has_tags", "Stephen Chow"},
      {"From Beijing with Love", "directed_by", "Stephen Chow"},
      {"From Beijing with Love", "written_by", "Stephen Chow"},
      {"From Beijing with Love", "starred_actors", "Stephen Chow"},
      {"From Beijing with Love", "starred_actors", "Anita Yuen"},
  };
  for (const auto& t : triples) kb.AddTriple(t[0], t[1], t[2]);
  return kb;
}

// Fresh empty directory under the system temp dir.
inline std::string TempDir(const std::string& name) {
  const auto path = std::filesystem::temp_directory_path() / ("dialeval_test_" + name);
  std::filesystem::remove_all(path);
  std::filesystem::create_directories(path);
  return path.string();
}

inline std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

inline void WriteFile(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

}  // namespace dialeval::testing

#endif  // DIALEVAL_TESTS_TEST_UTIL_H_
