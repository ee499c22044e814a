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

#include "dialeval/eval/evaluate.h"

#include <algorithm>
#include <cmath>
#include <exception>
#include <iomanip>
#include <limits>
#include <numeric>
#include <sstream>
#include <thread>

#include "dialeval/errors.h"

namespace dialeval {

namespace {

constexpr std::array<std::string_view, 3> kPositionCells = {"response 1", "response 2",
                                                            "response 3+"};

// True if (score a, id a) ranks before (score b, id b).
bool RanksBefore(double sa, int a, double sb, int b) {
  return sa > sb || (sa == sb && a < b);
}

std::vector<TokenId> EntityTokens(std::string_view text, const Vocabulary& vocab) {
  std::vector<TokenId> out;
  for (TokenId t : vocab.Tokenize(text)) {
    if (vocab.IsEntity(t)) out.push_back(t);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace

std::vector<int> RankCandidates(std::span<const double> scores) {
  std::vector<int> ids(scores.size());
  std::iota(ids.begin(), ids.end(), 0);
  std::sort(ids.begin(), ids.end(),
            [&](int a, int b) { return RanksBefore(scores[a], a, scores[b], b); });
  return ids;
}

int HitsAtK(std::span<const int> ranked, std::span<const int> gold, int k) {
  const size_t n = std::min<size_t>(ranked.size(), std::max(0, k));
  for (size_t i = 0; i < n; ++i) {
    if (std::find(gold.begin(), gold.end(), ranked[i]) != gold.end()) return 1;
  }
  return 0;
}

int BestGoldRank(std::span<const double> scores, std::span<const int> gold) {
  int best = -1;
  for (int g : gold) {
    if (best < 0 || RanksBefore(scores[g], g, scores[best], best)) best = g;
  }
  if (best < 0) return std::numeric_limits<int>::max();
  int rank = 1;
  for (size_t c = 0; c < scores.size(); ++c) {
    if (RanksBefore(scores[c], static_cast<int>(c), scores[best], best)) ++rank;
  }
  return rank;
}

int DefaultK(TaskTag task) {
  switch (task) {
    case TaskTag::kQa:
      return 1;
    case TaskTag::kRecs:
      return 100;
    case TaskTag::kQaRecs:
    case TaskTag::kDiscussion:
      return 10;
  }
  return 1;
}

bool EntityMatched(const Example& ex, const Vocabulary& vocab) {
  const auto in = EntityTokens(ex.input, vocab);
  if (in.empty()) return false;
  std::string gold;
  for (const std::string& g : ex.gold) gold += g + " . ";
  for (TokenId t : EntityTokens(gold, vocab)) {
    if (in.size() > 1 || in.front() != t) return true;
  }
  return false;
}

std::vector<size_t> EntityMatchSubset(const std::vector<Example>& examples,
                                      const Vocabulary& vocab) {
  std::vector<size_t> out;
  for (size_t i = 0; i < examples.size(); ++i) {
    if (EntityMatched(examples[i], vocab)) out.push_back(i);
  }
  return out;
}

std::optional<Breakdown> ParseBreakdown(std::string_view name) {
  if (name == "task") return Breakdown::kTask;
  if (name == "type") return Breakdown::kType;
  if (name == "position") return Breakdown::kPosition;
  if (name == "entity") return Breakdown::kEntity;
  return std::nullopt;
}

EvalReport::EvalReport() {
  for (int t = 0; t < kNumTasks; ++t) {
    by_task.push_back({"task", std::string(TaskName(static_cast<TaskTag>(t)))});
  }
  for (int c = 0; c < kNumQuestionClasses; ++c) {
    by_type.push_back({"type", std::string(QuestionClassLabel(static_cast<QuestionClass>(c)))});
  }
  for (std::string_view p : kPositionCells) by_position.push_back({"position", std::string(p)});
}

void EvalReport::Add(const Example& ex, bool matched, bool hit) {
  auto add = [hit](ReportCell& c) {
    ++c.count;
    c.hits += hit ? 1 : 0;
  };
  add(overall);
  add(by_task[static_cast<size_t>(ex.task)]);
  if (ex.question_class) add(by_type[static_cast<size_t>(*ex.question_class)]);
  add(by_position[std::clamp(ex.response_position, 1, 3) - 1]);
  add(matched ? entity_matched : entity_unmatched);
}

void EvalReport::Merge(const EvalReport& other) {
  auto merge = [](ReportCell& a, const ReportCell& b) {
    a.hits += b.hits;
    a.count += b.count;
  };
  merge(overall, other.overall);
  for (size_t i = 0; i < by_task.size(); ++i) merge(by_task[i], other.by_task[i]);
  for (size_t i = 0; i < by_type.size(); ++i) merge(by_type[i], other.by_type[i]);
  for (size_t i = 0; i < by_position.size(); ++i) merge(by_position[i], other.by_position[i]);
  merge(entity_matched, other.entity_matched);
  merge(entity_unmatched, other.entity_unmatched);
}

std::vector<ReportCell> EvalReport::Rows(Breakdown b) const {
  switch (b) {
    case Breakdown::kTask:
      return by_task;
    case Breakdown::kType:
      return by_type;
    case Breakdown::kPosition:
      return by_position;
    case Breakdown::kEntity:
      break;
  }
  return {entity_matched, entity_unmatched};
}

std::string EvalReport::ToText(std::optional<Breakdown> breakdown) const {
  std::vector<ReportCell> rows = {overall};
  if (breakdown) {
    const auto extra = Rows(*breakdown);
    rows.insert(rows.end(), extra.begin(), extra.end());
  }
  const std::string metric = k > 0 ? "hits@" + std::to_string(k) : "hits@k";
  size_t w_part = std::string_view("partition").size();
  size_t w_cell = std::string_view("cell").size();
  for (const ReportCell& r : rows) {
    w_part = std::max(w_part, r.partition.size());
    w_cell = std::max(w_cell, r.cell.size());
  }
  std::ostringstream out;
  out << std::left << std::setw(w_part + 2) << "partition" << std::setw(w_cell + 2) << "cell"
      << std::right << std::setw(9) << metric << std::setw(9) << "count" << '\n';
  out << std::fixed << std::setprecision(1);
  for (const ReportCell& r : rows) {
    out << std::left << std::setw(w_part + 2) << r.partition << std::setw(w_cell + 2) << r.cell
        << std::right << std::setw(9);
    if (r.count > 0) {
      out << r.percent();
    } else {
      out << "-";
    }
    out << std::setw(9) << r.count << '\n';
  }
  return out.str();
}

std::string EvalReport::ToTsv() const {
  std::ostringstream out;
  out << std::fixed << std::setprecision(4);
  auto row = [&](const ReportCell& r) {
    out << r.partition << '\t' << r.cell << '\t' << r.percent() << '\t' << r.count << '\n';
  };
  row(overall);
  for (const auto& r : by_task) row(r);
  for (const auto& r : by_type) row(r);
  for (const auto& r : by_position) row(r);
  row(entity_matched);
  row(entity_unmatched);
  return out.str();
}

EvalReport Evaluate(const Scorer& scorer, const std::vector<EncodedExample>& encoded,
                    const std::vector<Example>& examples, const Vocabulary& vocab,
                    int k, int threads, std::vector<ExampleOutcome>* outcomes) {
  if (encoded.size() != examples.size()) {
    throw Error("evaluate: encoded and raw example counts differ");
  }
  std::vector<ExampleOutcome> results(examples.size());
  std::vector<std::exception_ptr> errors(std::max(1, threads));
  auto work = [&](size_t worker, size_t begin, size_t end) {
    try {
      for (size_t i = begin; i < end; ++i) {
        const EncodedExample& ex = encoded[i];
        if (ex.gold.empty()) {
          throw DataError("example " + std::to_string(i) + " (dialog " +
                          std::to_string(examples[i].dialog_id) + ") has no gold candidate");
        }
        const std::vector<double> scores = scorer.Score(ex);
        if (scores.size() != ex.num_candidates()) {
          throw Error("scorer returned the wrong number of scores");
        }
        for (double s : scores) {
          if (std::isnan(s)) {
            throw NumericalError("NaN score for example " + std::to_string(i) +
                                 " (dialog " + std::to_string(examples[i].dialog_id) + ")");
          }
        }
        const int kk = k > 0 ? k : DefaultK(examples[i].task);
        results[i].rank = BestGoldRank(scores, ex.gold);
        results[i].hit = results[i].rank <= kk;
      }
    } catch (...) {
      errors[worker] = std::current_exception();
    }
  };
  const size_t n_workers = std::clamp<size_t>(threads, 1, std::max<size_t>(1, examples.size()));
  if (n_workers == 1) {
    work(0, 0, examples.size());
  } else {
    std::vector<std::thread> pool;
    const size_t chunk = (examples.size() + n_workers - 1) / n_workers;
    for (size_t w = 0; w < n_workers; ++w) {
      const size_t b = std::min(examples.size(), w * chunk);
      const size_t e = std::min(examples.size(), b + chunk);
      pool.emplace_back(work, w, b, e);
    }
    for (auto& t : pool) t.join();
  }
  for (const std::exception_ptr& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  EvalReport report;
  report.k = k;
  for (size_t i = 0; i < examples.size(); ++i) {
    report.Add(examples[i], EntityMatched(examples[i], vocab), results[i].hit);
  }
  if (outcomes) *outcomes = std::move(results);
  return report;
}

std::vector<double> OracleScorer::Score(const EncodedExample& ex) const {
  std::vector<double> scores(ex.num_candidates(), 0.0);
  for (int g : ex.gold) scores[g] = std::numeric_limits<double>::infinity();
  return scores;
}

}  // namespace dialeval
