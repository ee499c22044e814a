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

#include "dialeval/taskgen/templates.h"

#include <fstream>
#include <sstream>

#include "dialeval/errors.h"

namespace dialeval {

namespace {

constexpr std::string_view kDefaultTemplates = R"(# Default question and statement patterns.

[actor_to_movie]
what movies did [@actor] star in?
[@actor] appears in which movies?
which films feature [@actor]?

[movie_to_actors]
who starred in [@movie]?
who acted in the movie [@movie]?
who are the actors in [@movie]?

[movie_to_director]
who directed the film [@movie]?
who was the director of [@movie]?
[@movie] was directed by who?

[director_to_movie]
can you name a film directed by [@director]?
what movies did [@director] direct?
which films were directed by [@director]?

[movie_to_writer]
who wrote the movie [@movie]?
who is the writer of [@movie]?
[@movie] was written by whom?

[writer_to_movie]
what films did [@writer] write?
which movies were written by [@writer]?

[movie_to_tags]
what is [@movie] about?
what topics describe the film [@movie]?
describe [@movie] in a few words.

[tag_to_movie]
what movies are about [@tag]?
can you name a film about [@tag]?
which movies can be described by [@tag]?

[movie_to_year]
when was [@movie] released?
what year did [@movie] come out?
in which year was [@movie] released?

[movie_to_genre]
what is the genre of the film [@movie]?
what kind of movie is [@movie]?

[movie_to_language]
what language is [@movie] in?
what is the main language of [@movie]?

[recs_statement]
[@movies] are films i really liked. can you suggest a film?
some movies i like are [@movies]. can you suggest something else i might like?
i loved [@movies]. what should i watch next?
i enjoyed [@movies]. any other recommendations?

[qarecs_request]
i'm looking for a [@topic] movie.
can you recommend a [@topic] film?
i am in the mood for something [@topic].

[qarecs_followup_actors]
who stars in that?
who acted in that one?

[qarecs_followup_director]
who directed that?
who made that film?

[qarecs_followup_tags]
what else is that about?
what is that one about?

[qarecs_preference_actors]
i like [@actor] movies more. do you know anything else?
i'd prefer something with [@actor]. anything else?

[qarecs_preference_director]
i like [@director] movies more. do you know anything else?
i'd rather see something by [@director]. anything else?

[qarecs_preference_tags]
i like [@tag] movies more. do you know anything else?
i'd prefer something about [@tag]. anything else?
)";

size_t CountSlots(std::string_view pattern) {
  size_t n = 0;
  for (size_t pos = pattern.find("[@"); pos != std::string_view::npos;
       pos = pattern.find("[@", pos + 2)) {
    ++n;
  }
  return n;
}

}  // namespace

std::string TemplateSet::RequiredSlot(std::string_view section) {
  if (auto c = ParseQuestionClass(section)) {
    switch (*c) {
      case QuestionClass::kActorToMovie:
        return "actor";
      case QuestionClass::kDirectorToMovie:
        return "director";
      case QuestionClass::kWriterToMovie:
        return "writer";
      case QuestionClass::kTagToMovie:
        return "tag";
      default:
        return "movie";
    }
  }
  if (section == kRecsStatement) return "movies";
  if (section == kQaRecsRequest) return "topic";
  if (section == kFollowupActors || section == kFollowupDirector ||
      section == kFollowupTags) {
    return "";
  }
  if (section == kPreferenceActors) return "actor";
  if (section == kPreferenceDirector) return "director";
  if (section == kPreferenceTags) return "tag";
  throw DataError("unknown template section [" + std::string(section) + "]");
}

TemplateSet TemplateSet::Parse(std::string_view text) {
  TemplateSet set;
  std::istringstream in{std::string(text)};
  std::string line;
  std::string section;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) {
      line.pop_back();
    }
    if (line.empty() || line[0] == '#') continue;
    const std::string where = "template line " + std::to_string(line_no);
    if (line.front() == '[' && line.back() == ']' && line.rfind("[@", 0) != 0) {
      section = line.substr(1, line.size() - 2);
      RequiredSlot(section);  // validates the name
      set.sections_[section];
      continue;
    }
    if (section.empty()) throw DataError(where + ": pattern outside a section");
    const std::string slot = RequiredSlot(section);
    const size_t slots = CountSlots(line);
    if (slot.empty() ? slots != 0
                     : (slots != 1 || line.find("[@" + slot + "]") == std::string::npos)) {
      throw DataError(where + ": section [" + section + "] requires " +
                      (slot.empty() ? std::string("no slot") : "exactly one [@" + slot + "]"));
    }
    set.sections_[section].push_back(line);
  }
  return set;
}

TemplateSet TemplateSet::Load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open template file " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return Parse(buf.str());
}

const TemplateSet& TemplateSet::Default() {
  static const TemplateSet set = Parse(kDefaultTemplates);
  return set;
}

bool TemplateSet::Has(std::string_view section) const {
  auto it = sections_.find(section);
  return it != sections_.end() && !it->second.empty();
}

const std::vector<std::string>& TemplateSet::Patterns(std::string_view section) const {
  static const std::vector<std::string> kEmpty;
  auto it = sections_.find(section);
  return it == sections_.end() ? kEmpty : it->second;
}

std::string TemplateSet::Realize(std::string_view pattern, std::string_view value) {
  const size_t open = pattern.find("[@");
  if (open == std::string_view::npos) return std::string(pattern);
  const size_t close = pattern.find(']', open);
  std::string out(pattern.substr(0, open));
  out += value;
  out += pattern.substr(close + 1);
  return out;
}

std::string FormatList(const std::vector<std::string>& items) {
  if (items.empty()) return {};
  if (items.size() == 1) return items[0];
  if (items.size() == 2) return items[0] + " and " + items[1];
  std::string out;
  for (size_t i = 0; i + 1 < items.size(); ++i) out += items[i] + ", ";
  return out + "and " + items.back();
}

}  // namespace dialeval
