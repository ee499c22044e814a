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
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "dialeval/errors.h"
#include "dialeval/ingest/sources.h"
#include "json.hpp"

namespace dialeval {

std::string SanitizeUtterance(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    out.push_back((c == '\t' || c == '\n' || c == '\r' || c == '|') ? ' ' : c);
  }
  const size_t first = out.find_first_not_of(' ');
  if (first == std::string::npos) return {};
  const size_t last = out.find_last_not_of(' ');
  return out.substr(first, last - first + 1);
}

std::vector<ThreadRecord> ReadThreadRecords(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open threads file " + path);
  std::vector<ThreadRecord> records;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = path + ":" + std::to_string(line_no);
    try {
      const auto j = nlohmann::json::parse(line);
      ThreadRecord r;
      r.id = j.at("id").get<int64_t>();
      const auto& parent = j.at("parent_id");
      if (!parent.is_null()) r.parent_id = parent.get<int64_t>();
      r.body = j.at("body").get<std::string>();
      records.push_back(std::move(r));
    } catch (const nlohmann::json::exception& e) {
      throw DataError(where + ": " + e.what());
    }
  }
  return records;
}

void WriteThreadRecords(const std::vector<ThreadRecord>& records,
                        const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write threads file " + path);
  for (const ThreadRecord& r : records) {
    nlohmann::ordered_json j;
    j["id"] = r.id;
    j["parent_id"] = r.parent_id ? nlohmann::ordered_json(*r.parent_id)
                                 : nlohmann::ordered_json(nullptr);
    j["body"] = r.body;
    out << j.dump() << '\n';
  }
}

ThreadCorpus FlattenThreads(const std::vector<ThreadRecord>& records) {
  std::unordered_map<int64_t, size_t> index;
  for (size_t i = 0; i < records.size(); ++i) {
    if (!index.emplace(records[i].id, i).second) {
      throw DataError("duplicate thread record id " +
                      std::to_string(records[i].id));
    }
  }

  // Parent-chain walk with three-colour marking to reject cycles.
  std::vector<uint8_t> state(records.size(), 0);
  for (size_t start = 0; start < records.size(); ++start) {
    std::vector<size_t> path;
    size_t cur = start;
    while (true) {
      if (state[cur] == 2) break;
      if (state[cur] == 1) {
        throw DataError("cyclic parent reference at record " +
                        std::to_string(records[cur].id));
      }
      state[cur] = 1;
      path.push_back(cur);
      const auto& parent = records[cur].parent_id;
      if (!parent) break;
      auto it = index.find(*parent);
      if (it == index.end()) break;  // dangling parent: treated as detached
      cur = it->second;
    }
    for (size_t p : path) state[p] = 2;
  }

  std::map<int64_t, std::set<int64_t>> children;
  std::vector<int64_t> roots;
  for (const ThreadRecord& r : records) {
    if (!r.parent_id) {
      roots.push_back(r.id);
    } else if (index.contains(*r.parent_id)) {
      children[*r.parent_id].insert(r.id);
    }
  }
  std::sort(roots.begin(), roots.end());

  ThreadCorpus corpus;
  std::unordered_set<int64_t> used;
  std::unordered_set<std::string> dialog_texts;
  for (int64_t root : roots) {
    std::vector<int64_t> chain = {root};
    for (auto it = children.find(root); it != children.end() && !it->second.empty();
         it = children.find(chain.back())) {
      chain.push_back(*it->second.begin());
    }
    if (chain.size() < 2) continue;
    ThreadDialog dialog;
    dialog.root_id = root;
    for (size_t i = 0; i + 1 < chain.size(); i += 2) {
      Exchange ex;
      ex.post = SanitizeUtterance(records[index[chain[i]]].body);
      ex.reply = SanitizeUtterance(records[index[chain[i + 1]]].body);
      dialog_texts.insert(ex.post);
      dialog_texts.insert(ex.reply);
      used.insert(chain[i]);
      used.insert(chain[i + 1]);
      dialog.exchanges.push_back(std::move(ex));
    }
    corpus.dialogs.push_back(std::move(dialog));
  }

  std::vector<const ThreadRecord*> leftovers;
  for (const ThreadRecord& r : records) {
    if (r.parent_id && !used.contains(r.id)) leftovers.push_back(&r);
  }
  std::sort(leftovers.begin(), leftovers.end(),
            [](const ThreadRecord* a, const ThreadRecord* b) { return a->id < b->id; });
  std::unordered_set<std::string> pooled;
  for (const ThreadRecord* r : leftovers) {
    std::string text = SanitizeUtterance(r->body);
    if (text.empty() || dialog_texts.contains(text) || pooled.contains(text)) {
      continue;
    }
    pooled.insert(text);
    corpus.candidate_pool.push_back(std::move(text));
  }
  return corpus;
}

ThreadCorpus LoadThreads(const std::string& path) {
  return FlattenThreads(ReadThreadRecords(path));
}

}  // namespace dialeval
