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

#include "dialeval/taskgen/dataset_io.h"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "dialeval/errors.h"

namespace dialeval {

namespace {

constexpr char kGoldSeparator = '|';

std::string JoinGold(const std::vector<std::string>& gold) {
  std::string out;
  for (size_t i = 0; i < gold.size(); ++i) {
    if (i > 0) out += kGoldSeparator;
    out += gold[i];
  }
  return out;
}

std::vector<std::string> SplitGold(std::string_view s) {
  std::vector<std::string> out;
  size_t start = 0;
  while (true) {
    const size_t bar = s.find(kGoldSeparator, start);
    out.emplace_back(s.substr(start, bar - start));
    if (bar == std::string_view::npos) break;
    start = bar + 1;
  }
  return out;
}

void CheckText(std::string_view s, std::string_view what) {
  if (s.find_first_of("\t\n\r") != std::string_view::npos) {
    throw DataError(std::string(what) + " contains a tab or newline: '" +
                    std::string(s) + "'");
  }
}

// Reply text an exchange contributes to the context of later exchanges.
std::string ContextReply(const Example& ex) {
  return ex.candidates.kind == CandidateSpec::Kind::kAllEntities
             ? JoinAnswers(ex.gold)
             : (ex.gold.empty() ? std::string() : ex.gold.front());
}

std::string CandidatesField(const CandidateSpec& spec) {
  if (spec.kind == CandidateSpec::Kind::kAllEntities) return "entities";
  if (spec.pool_name.empty()) return "gold";
  return "pool:" + spec.pool_name;
}

std::string PathOf(const std::string& dir, const std::string& file) {
  return (std::filesystem::path(dir) / file).string();
}

template <typename T>
T ParseNumber(std::string_view s, const std::string& where) {
  T value{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw DataError(where + ": bad number '" + std::string(s) + "'");
  }
  return value;
}

std::vector<std::string_view> SplitTabs(std::string_view line) {
  std::vector<std::string_view> out;
  size_t start = 0;
  while (true) {
    const size_t tab = line.find('\t', start);
    out.push_back(line.substr(start, tab - start));
    if (tab == std::string_view::npos) break;
    start = tab + 1;
  }
  return out;
}

}  // namespace

void WriteSplit(const std::string& dir, const std::string& split,
                const std::vector<Example>& examples) {
  std::filesystem::create_directories(dir);
  const std::string txt_path = PathOf(dir, split + ".txt");
  const std::string meta_path = PathOf(dir, split + ".meta.tsv");
  std::ofstream txt(txt_path, std::ios::binary);
  std::ofstream meta(meta_path, std::ios::binary);
  if (!txt || !meta) throw DataError("cannot write split files in " + dir);

  size_t line_no = 0;
  int block_index = 0;
  bool in_block = false;
  int64_t block_dialog = 0;
  std::vector<Turn> block_turns;
  auto emit = [&](const std::string& user, const std::string& reply) {
    CheckText(user, "utterance");
    CheckText(reply, "reply");
    txt << ++block_index << ' ' << user << '\t' << reply << '\n';
    ++line_no;
  };

  for (const Example& ex : examples) {
    if (!in_block || ex.dialog_id != block_dialog || ex.context != block_turns) {
      block_index = 0;
      block_turns.clear();
      for (const Turn& t : ex.context) {
        emit(t.user, t.reply);
        block_turns.push_back(t);
      }
      in_block = true;
      block_dialog = ex.dialog_id;
    }
    const size_t first = line_no + 1 - ex.context.size();
    emit(ex.input, JoinGold(ex.gold));
    block_turns.push_back({ex.input, ContextReply(ex)});
    meta << first << '\t' << line_no << '\t' << TaskName(ex.task) << '\t'
         << (ex.question_class ? QuestionClassName(*ex.question_class) : "-")
         << '\t' << ex.response_position << '\t' << ex.dialog_id << '\t'
         << CandidatesField(ex.candidates) << '\n';
  }
  if (!txt || !meta) throw DataError("write failed in " + dir);
}

std::vector<Example> ReadSplit(const std::string& dir, const std::string& split) {
  const std::string txt_path = PathOf(dir, split + ".txt");
  const std::string meta_path = PathOf(dir, split + ".meta.tsv");
  std::ifstream txt(txt_path, std::ios::binary);
  if (!txt) throw DataError("cannot open " + txt_path);
  std::ifstream meta(meta_path, std::ios::binary);
  if (!meta) throw DataError("cannot open " + meta_path);

  struct Line {
    std::string user;
    std::string reply;
  };
  std::vector<Line> lines;
  std::string line;
  for (size_t n = 1; std::getline(txt, line); ++n) {
    const std::string where = txt_path + ":" + std::to_string(n);
    const size_t space = line.find(' ');
    const size_t tab = line.find('\t');
    if (space == std::string::npos || tab == std::string::npos || tab < space) {
      throw DataError(where + ": expected 'n user\\treply'");
    }
    ParseNumber<int>(std::string_view(line).substr(0, space), where);
    lines.push_back({line.substr(space + 1, tab - space - 1), line.substr(tab + 1)});
  }

  // Parse all rows first: the context reply of a line depends on the
  // candidate kind of the example it was the answer of.
  struct Row {
    size_t first, last;
    TaskTag task;
    std::optional<QuestionClass> cls;
    int position;
    int64_t dialog;
    std::string candidates;
  };
  std::vector<Row> rows;
  std::map<size_t, bool> entity_answer_lines;
  for (size_t n = 1; std::getline(meta, line); ++n) {
    const std::string where = meta_path + ":" + std::to_string(n);
    if (line.empty()) continue;
    const auto f = SplitTabs(line);
    if (f.size() != 7) throw DataError(where + ": expected 7 fields");
    Row r;
    r.first = ParseNumber<size_t>(f[0], where);
    r.last = ParseNumber<size_t>(f[1], where);
    if (r.first < 1 || r.first > r.last || r.last > lines.size()) {
      throw DataError(where + ": line range out of bounds");
    }
    const auto task = ParseTask(f[2]);
    if (!task) throw DataError(where + ": unknown task '" + std::string(f[2]) + "'");
    r.task = *task;
    if (f[3] != "-") {
      r.cls = ParseQuestionClass(f[3]);
      if (!r.cls) {
        throw DataError(where + ": unknown class '" + std::string(f[3]) + "'");
      }
    }
    r.position = ParseNumber<int>(f[4], where);
    r.dialog = ParseNumber<int64_t>(f[5], where);
    r.candidates = std::string(f[6]);
    if (r.candidates != "entities" && r.candidates != "gold" &&
        !r.candidates.starts_with("pool:")) {
      throw DataError(where + ": bad candidates field '" + r.candidates + "'");
    }
    entity_answer_lines[r.last] = r.candidates == "entities";
    rows.push_back(std::move(r));
  }

  std::map<std::string, std::shared_ptr<const std::vector<std::string>>> pools;
  std::vector<Example> out;
  out.reserve(rows.size());
  for (const Row& r : rows) {
    Example ex;
    for (size_t i = r.first; i < r.last; ++i) {
      const Line& l = lines[i - 1];
      const auto it = entity_answer_lines.find(i);
      const bool entity = it != entity_answer_lines.end() && it->second;
      ex.context.push_back({l.user, entity ? JoinAnswers(SplitGold(l.reply)) : l.reply});
    }
    const Line& l = lines[r.last - 1];
    ex.input = l.user;
    if (r.candidates == "entities") {
      ex.gold = SplitGold(l.reply);
      ex.candidates = CandidateSpec::AllEntities();
    } else {
      ex.gold = {l.reply};
      if (r.candidates == "gold") {
        ex.candidates = CandidateSpec::Explicit("", nullptr);
      } else {
        const std::string name = r.candidates.substr(5);
        auto& pool = pools[name];
        if (!pool) {
          pool = std::make_shared<const std::vector<std::string>>(ReadPool(dir, name));
        }
        ex.candidates = CandidateSpec::Explicit(name, pool);
      }
    }
    ex.task = r.task;
    ex.question_class = r.cls;
    ex.response_position = r.position;
    ex.dialog_id = r.dialog;
    out.push_back(std::move(ex));
  }
  return out;
}

void WritePool(const std::string& dir, const std::string& name,
               const std::vector<std::string>& pool) {
  std::filesystem::create_directories(dir);
  const std::string path = PathOf(dir, "candidates_" + name + ".txt");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path);
  for (const std::string& c : pool) {
    CheckText(c, "candidate");
    out << c << '\n';
  }
  if (!out) throw DataError("write failed: " + path);
}

std::vector<std::string> ReadPool(const std::string& dir, const std::string& name) {
  const std::string path = PathOf(dir, "candidates_" + name + ".txt");
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path);
  std::vector<std::string> pool;
  std::string line;
  while (std::getline(in, line)) pool.push_back(line);
  return pool;
}

}  // namespace dialeval
