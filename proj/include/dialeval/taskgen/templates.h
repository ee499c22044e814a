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

#ifndef DIALEVAL_TASKGEN_TEMPLATES_H_
#define DIALEVAL_TASKGEN_TEMPLATES_H_

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "dialeval/taskgen/example.h"

namespace dialeval {

// Section names used in template files besides the eleven question classes.
inline constexpr std::string_view kRecsStatement = "recs_statement";
inline constexpr std::string_view kQaRecsRequest = "qarecs_request";
inline constexpr std::string_view kFollowupActors = "qarecs_followup_actors";
inline constexpr std::string_view kFollowupDirector = "qarecs_followup_director";
inline constexpr std::string_view kFollowupTags = "qarecs_followup_tags";
inline constexpr std::string_view kPreferenceActors = "qarecs_preference_actors";
inline constexpr std::string_view kPreferenceDirector = "qarecs_preference_director";
inline constexpr std::string_view kPreferenceTags = "qarecs_preference_tags";

// Natural-language patterns with slot markers such as "[@actor]".
//
// File format: plain text, "[section]" header lines followed by one pattern
// per line; blank lines and lines starting with '#' are ignored. Each
// section requires exactly one occurrence of its slot (or none for the
// follow-up questions), and no other slot.
class TemplateSet {
 public:
  static TemplateSet Parse(std::string_view text);
  static TemplateSet Load(const std::string& path);
  // Patterns imitating the sample dialogs of the movie tasks.
  static const TemplateSet& Default();

  // Slot name required by a section ("" when none). Throws DataError for an
  // unknown section.
  static std::string RequiredSlot(std::string_view section);

  const std::vector<std::string>& Patterns(std::string_view section) const;
  bool Has(std::string_view section) const;

  // Replaces the section's slot marker with `value`.
  static std::string Realize(std::string_view pattern, std::string_view value);

 private:
  std::map<std::string, std::vector<std::string>, std::less<>> sections_;
};

// "a", "a and b", "a, b, and c".
std::string FormatList(const std::vector<std::string>& items);

}  // namespace dialeval

#endif  // DIALEVAL_TASKGEN_TEMPLATES_H_
