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

#include "dialeval/cli/cli.h"

#include <algorithm>
#include <charconv>
#include <iomanip>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "dialeval/errors.h"
#include "dialeval/eval/evaluate.h"
#include "dialeval/ingest/sources.h"
#include "dialeval/models/model_io.h"
#include "dialeval/random.h"
#include "dialeval/taskgen/dataset_io.h"
#include "dialeval/taskgen/generators.h"

namespace dialeval {

namespace fs = std::filesystem;

namespace {

constexpr std::array<Split, 3> kSplits = {Split::kTrain, Split::kDev, Split::kTest};

struct GenOptions {
  std::string task;
  std::string out;
  bool synthetic = false;
  int movies = 100;
  int people = 150;
  int users = 200;
  int threads = 500;
  double mention_prob = 0.8;
  std::string kb_path;
  std::string ratings_path;
  std::string threads_path;
  std::string templates_path;
  int n_train = 1000;
  int n_dev = 100;
  int n_test = 100;
  int pool_size = 1000;
  int min_freq = 5;
  std::vector<double> proportions;
  std::optional<uint64_t> seed;
};

struct TrainOptions {
  std::string data;
  std::string model = "memn2n";
  std::string out;
  std::string log;
  std::optional<uint64_t> seed;
  TrainConfig cfg;
  bool no_kb = false;
  bool ir_no_context = false;
};

struct EvalOptions {
  std::string data;
  std::string model;
  std::string split = "test";
  int k = 0;
  std::string breakdown;
  bool oracle = false;
  int threads = 0;
  std::string out;
};

struct ChatOptions {
  std::string data;
  std::string model;
  std::string pool;
  std::string transcript;
};

struct ReportOptions {
  std::vector<std::string> inputs;
  std::string partition = "task";
};

std::string PathIn(const std::string& dir, const std::string& file) {
  return (fs::path(dir) / file).string();
}

void WriteText(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path);
  out << text;
  if (!out) throw DataError("write failed: " + path);
}

class Manifest {
 public:
  template <typename T>
  void Add(const std::string& key, const T& value) {
    std::ostringstream v;
    v.precision(12);
    v << value;
    lines_ += key + "\t" + v.str() + "\n";
  }
  void Save(const std::string& path) const { WriteText(path, lines_); }

 private:
  std::string lines_;
};

// ---------------------------------------------------------------- gen

void CollectTexts(const std::vector<Example>& examples, std::vector<std::string>* corpus) {
  for (const Example& ex : examples) {
    for (const Turn& t : ex.context) {
      corpus->push_back(t.user);
      corpus->push_back(t.reply);
    }
    corpus->push_back(ex.input);
    for (const std::string& g : ex.gold) corpus->push_back(g);
  }
}

Ratings SubsetRatings(const Ratings& all, const std::vector<UserId>& users) {
  Ratings out;
  for (UserId u : users) {
    const UserId nu = out.AddUser(all.user_name(u));
    for (const Rating& r : all.user_ratings(u)) out.Set(nu, r.movie, r.value);
  }
  return out;
}

int CmdGen(const GenOptions& o, std::ostream& out, std::ostream& err) {
  const auto task = o.task == "joint" ? std::nullopt : ParseTask(o.task);
  if (o.task != "joint" && !task) throw UsageError("unknown task '" + o.task + "'");
  const bool joint = o.task == "joint";
  const TaskTag tag = task.value_or(TaskTag::kQa);
  const bool need_kb = joint || tag != TaskTag::kDiscussion;
  const bool need_ratings = joint || tag == TaskTag::kRecs || tag == TaskTag::kQaRecs;
  const bool need_threads = joint || tag == TaskTag::kDiscussion;
  const uint64_t seed = ResolveSeed(o.seed);

  KnowledgeBase kb;
  std::optional<Ratings> ratings;
  std::optional<ThreadCorpus> threads;
  std::vector<ThreadRecord> thread_records;
  if (o.synthetic) {
    if (o.movies < 1 || o.people < 1 || o.users < 1 || o.threads < 1) {
      throw UsageError("synthetic sizes must be at least 1");
    }
    SyntheticConfig sc;
    sc.seed = seed;
    sc.n_movies = o.movies;
    sc.n_people = o.people;
    sc.n_users = o.users;
    sc.n_threads = o.threads;
    sc.mention_prob = o.mention_prob;
    SyntheticSources src = GenerateSyntheticSources(sc);
    kb = std::move(src.kb);
    ratings = std::move(src.ratings);
    threads = std::move(src.threads);
    thread_records = std::move(src.thread_records);
  } else {
    if (need_kb && o.kb_path.empty()) {
      throw UsageError("--kb is required for task " + o.task + " (or use --synthetic)");
    }
    if (need_ratings && o.ratings_path.empty()) {
      throw UsageError("--ratings is required for task " + o.task + " (or use --synthetic)");
    }
    if (need_threads && o.threads_path.empty()) {
      throw UsageError("--threads-file is required for task " + o.task +
                       " (or use --synthetic)");
    }
    if (!o.kb_path.empty()) kb = KnowledgeBase::Load(o.kb_path);
    if (!o.ratings_path.empty()) {
      RatingsLoadStats stats;
      ratings = LoadRatings(o.ratings_path, kb, &stats);
      if (stats.unknown_movie_ratings + stats.sparse_movie_ratings > 0) {
        err << "ratings: dropped " << stats.unknown_movie_ratings
            << " ratings of unknown movies and " << stats.sparse_movie_ratings
            << " ratings of movies with fewer than 2 ratings\n";
      }
    }
    if (!o.threads_path.empty()) threads = LoadThreads(o.threads_path);
  }
  kb.Freeze();
  const TemplateSet templates =
      o.templates_path.empty() ? TemplateSet::Default() : TemplateSet::Load(o.templates_path);

  std::vector<std::string> warnings;
  std::array<int, 3> sizes = {o.n_train, o.n_dev, o.n_test};
  for (int s : sizes) {
    if (s < 0) throw UsageError("split sizes must be non-negative");
  }
  std::optional<UserSplit> user_split;
  if (ratings) user_split = PartitionUsers(*ratings, DeriveSeed(seed, 2));

  auto gen_qa = [&] {
    SplitSet s = GenerateQa(kb, templates, DeriveSeed(seed, 1), sizes[0], sizes[1], sizes[2]);
    warnings.insert(warnings.end(), s.warnings.begin(), s.warnings.end());
    return s;
  };
  auto gen_recs = [&] {
    SplitSet s;
    for (Split sp : kSplits) {
      const auto& users = user_split->at(sp);
      if (users.empty() && sizes[static_cast<size_t>(sp)] > 0) {
        throw DataError("no eligible users for the " + std::string(SplitName(sp)) + " split");
      }
      s.at(sp) = GenerateRecs(*ratings, kb, templates,
                              DeriveSeed(seed, 10 + static_cast<uint64_t>(sp)),
                              sizes[static_cast<size_t>(sp)], users,
                              DialogIdBase(TaskTag::kRecs, sp));
    }
    return s;
  };
  auto gen_qarecs = [&] {
    SplitSet s;
    for (Split sp : kSplits) {
      const auto& users = user_split->at(sp);
      if (users.empty() && sizes[static_cast<size_t>(sp)] > 0) {
        throw DataError("no eligible users for the " + std::string(SplitName(sp)) + " split");
      }
      QaRecsResult r = GenerateQaRecs(kb, *ratings, templates,
                                      DeriveSeed(seed, 20 + static_cast<uint64_t>(sp)),
                                      sizes[static_cast<size_t>(sp)], users,
                                      DialogIdBase(TaskTag::kQaRecs, sp));
      if (r.skipped_dialogs > 0) {
        warnings.push_back(std::string(SplitName(sp)) + ": skipped " +
                           std::to_string(r.skipped_dialogs) + " qarecs dialogs");
      }
      s.at(sp) = std::move(r.examples);
    }
    return s;
  };
  auto gen_discussion = [&] {
    DiscussionSplits d = GenerateDiscussion(*threads, {o.pool_size, o.pool_size},
                                            DeriveSeed(seed, 4));
    warnings.insert(warnings.end(), d.sets.warnings.begin(), d.sets.warnings.end());
    return d;
  };

  SplitSet sets;
  std::vector<std::pair<std::string, std::vector<std::string>>> pools;
  if (!joint) {
    switch (tag) {
      case TaskTag::kQa:
        sets = gen_qa();
        break;
      case TaskTag::kRecs:
        sets = gen_recs();
        break;
      case TaskTag::kQaRecs:
        sets = gen_qarecs();
        break;
      case TaskTag::kDiscussion: {
        DiscussionSplits d = gen_discussion();
        sets = std::move(d.sets);
        pools = {{"dev", *d.dev_pool}, {"test", *d.test_pool}};
        break;
      }
    }
  } else {
    std::array<SplitSet, kNumTasks> parts;
    parts[0] = gen_qa();
    parts[1] = gen_recs();
    parts[2] = gen_qarecs();
    DiscussionSplits d = gen_discussion();
    parts[3] = std::move(d.sets);
    pools = {{"dev", *d.dev_pool}, {"test", *d.test_pool}};
    std::vector<double> props = o.proportions;
    if (props.empty()) {
      double total = 0;
      for (const auto& p : parts) total += static_cast<double>(p.train.size());
      for (const auto& p : parts) props.push_back(p.train.size() / std::max(1.0, total));
    }
    if (props.size() != kNumTasks) {
      throw UsageError("--proportions needs four values (qa, recs, qarecs, discussion)");
    }
    for (Split sp : kSplits) {
      std::vector<std::vector<Example>> comps;
      size_t n_total = 0;
      for (auto& p : parts) {
        n_total += p.at(sp).size();
        comps.push_back(std::move(p.at(sp)));
      }
      std::vector<double> split_props = props;
      for (size_t i = 0; i < comps.size(); ++i) {
        if (comps[i].empty()) split_props[i] = 0;
      }
      double sum = 0;
      for (double x : split_props) sum += x;
      if (sum <= 0) continue;
      for (double& x : split_props) x /= sum;
      sets.at(sp) = GenerateJoint(comps, split_props,
                                  DeriveSeed(seed, 30 + static_cast<uint64_t>(sp)), n_total);
    }
  }

  // Vocabulary over every generated text, the pools and the KB facts.
  std::vector<std::string> corpus;
  for (Split sp : kSplits) CollectTexts(sets.at(sp), &corpus);
  for (const auto& [name, pool] : pools) corpus.insert(corpus.end(), pool.begin(), pool.end());
  for (size_t f = 0; f < kb.num_facts(); ++f) corpus.push_back(kb.RenderFact(static_cast<FactId>(f)));
  std::vector<std::string> entities;
  for (size_t e = 0; e < kb.num_entities(); ++e) entities.push_back(kb.EntityName(static_cast<EntityId>(e)));
  const Vocabulary vocab = Vocabulary::Build(corpus, entities, o.min_freq);

  fs::create_directories(o.out);
  if (kb.num_triples() > 0) kb.Save(PathIn(o.out, "kb.tsv"));
  if (ratings) {
    SaveRatings(*ratings, kb, PathIn(o.out, "ratings.tsv"));
    SaveRatings(SubsetRatings(*ratings, user_split->train), kb,
                PathIn(o.out, "ratings_train.tsv"));
  }
  if (need_threads && !thread_records.empty()) {
    WriteThreadRecords(thread_records, PathIn(o.out, "threads.jsonl"));
  }
  vocab.Save(PathIn(o.out, "vocab.tsv"));
  for (Split sp : kSplits) WriteSplit(o.out, std::string(SplitName(sp)), sets.at(sp));
  for (const auto& [name, pool] : pools) WritePool(o.out, name, pool);

  Manifest m;
  m.Add("command", "gen");
  m.Add("task", o.task);
  m.Add("seed", seed);
  m.Add("synthetic", o.synthetic ? 1 : 0);
  if (o.synthetic) {
    m.Add("movies", o.movies);
    m.Add("people", o.people);
    m.Add("users", o.users);
    m.Add("threads", o.threads);
    m.Add("mention_prob", o.mention_prob);
  } else {
    m.Add("kb", o.kb_path);
    m.Add("ratings", o.ratings_path);
    m.Add("threads_file", o.threads_path);
  }
  m.Add("templates", o.templates_path.empty() ? "default" : o.templates_path);
  m.Add("train", o.n_train);
  m.Add("dev", o.n_dev);
  m.Add("test", o.n_test);
  m.Add("pool_size", o.pool_size);
  m.Add("min_freq", o.min_freq);
  m.Add("vocab_size", vocab.size());
  m.Add("entities", vocab.entity_ids().size());
  for (Split sp : kSplits) m.Add(std::string(SplitName(sp)) + "_examples", sets.at(sp).size());
  for (const std::string& w : warnings) {
    m.Add("warning", w);
    err << "warning: " << w << '\n';
  }
  m.Save(PathIn(o.out, "manifest.txt"));
  out << "wrote " << sets.train.size() << "/" << sets.dev.size() << "/" << sets.test.size()
      << " train/dev/test examples to " << o.out << " (vocabulary " << vocab.size() << ")\n";
  return kExitOk;
}

// ---------------------------------------------------------------- train

KnowledgeBase LoadKbIfPresent(const std::string& dir) {
  const std::string path = PathIn(dir, "kb.tsv");
  KnowledgeBase kb = fs::exists(path) ? KnowledgeBase::Load(path) : KnowledgeBase();
  kb.Freeze();
  return kb;
}

std::vector<RatingTriple> RatingTriples(const Ratings& ratings, const KnowledgeBase& kb,
                                        const Vocabulary& vocab) {
  std::vector<RatingTriple> out;
  for (UserId u = 0; u < static_cast<UserId>(ratings.num_users()); ++u) {
    for (const Rating& r : ratings.user_ratings(u)) {
      const auto tok = vocab.Find(kb.EntityName(r.movie));
      if (!tok) continue;
      out.push_back({u, *tok, static_cast<double>(r.value)});
    }
  }
  return out;
}

int CmdTrain(TrainOptions o, std::ostream& out) {
  const auto kind = ParseModelKind(o.model);
  if (!kind) throw UsageError("unknown model '" + o.model + "'");
  TrainConfig cfg = o.cfg;
  cfg.model = *kind;
  cfg.seed = ResolveSeed(o.seed);
  if (o.no_kb) cfg.memory.use_kb = false;
  if (o.ir_no_context) cfg.ir_context = false;
  cfg.Validate();
  if (!fs::is_directory(o.data)) throw UsageError("data directory not found: " + o.data);

  const Vocabulary vocab = Vocabulary::Load(PathIn(o.data, "vocab.tsv"));
  const KnowledgeBase kb = LoadKbIfPresent(o.data);
  const std::vector<Example> train = ReadSplit(o.data, "train");
  if (train.empty()) throw DataError("training split is empty");
  const Encoder encoder(vocab, &kb, cfg.memory, cfg.model == ModelKind::kMemN2N);
  const std::vector<EncodedExample> encoded = encoder.EncodeAll(train);
  const auto responses = TrainingResponses(encoded);

  std::ostringstream log;
  auto log_epoch = [&log](int epoch, double loss) {
    log << epoch << '\t' << std::setprecision(10) << loss << '\n';
  };
  ModelBundle bundle;
  bundle.config = cfg;
  Rng init(DeriveSeed(cfg.seed, 0));
  std::vector<double> losses;
  switch (cfg.model) {
    case ModelKind::kSupEmb:
      bundle.supemb = std::make_unique<EmbeddingModel>(vocab.size(), cfg.d, cfg.w == 1,
                                                       cfg.init_std, init);
      losses = bundle.supemb->Train(encoded, cfg, responses, log_epoch);
      break;
    case ModelKind::kMemN2N:
      bundle.memn2n = std::make_unique<MemN2N>(vocab.size(), cfg.d, cfg.hops, cfg.w,
                                               cfg.memory.time_slots(), cfg.init_std, init);
      losses = bundle.memn2n->Train(encoded, cfg, responses, log_epoch);
      break;
    case ModelKind::kIr: {
      TfIdfModel::Options opt{cfg.ir_variant, cfg.ir_context, cfg.rf_weight};
      bundle.ir = std::make_unique<TfIdfModel>(
          TfIdfModel::ComputeIdf(TfIdfModel::Documents(encoded), vocab.size()), opt);
      if (cfg.ir_variant == 1 || cfg.rf_weight > 0) {
        bundle.ir->SetPairs(TfIdfModel::PairsFrom(encoded, cfg.ir_context));
      }
      break;
    }
    case ModelKind::kMf: {
      const std::string path = PathIn(o.data, "ratings_train.tsv");
      if (!fs::exists(path)) throw DataError("mf needs " + path);
      const Ratings ratings = LoadRatings(path, kb);
      const auto triples = RatingTriples(ratings, kb, vocab);
      bundle.mf = std::make_unique<MfModel>(
          MfModel::Train(triples, ratings.num_users(), vocab.size(), cfg, &losses));
      for (size_t e = 0; e < losses.size(); ++e) log_epoch(static_cast<int>(e + 1), losses[e]);
      break;
    }
  }
  if (o.out.empty()) throw UsageError("--out is required");
  if (fs::path(o.out).has_parent_path()) fs::create_directories(fs::path(o.out).parent_path());
  SaveModel(o.out, bundle);
  WriteText(o.log.empty() ? o.out + ".log" : o.log, log.str());
  out << "trained " << ModelKindName(cfg.model) << " on " << train.size() << " examples";
  if (!losses.empty()) out << ", final loss " << losses.back();
  out << "; wrote " << o.out << '\n';
  return kExitOk;
}

// ---------------------------------------------------------------- eval

size_t ModelVocabSize(const ModelBundle& b) {
  switch (b.kind()) {
    case ModelKind::kSupEmb:
      return b.supemb->vocab_size();
    case ModelKind::kMemN2N:
      return b.memn2n->vocab_size();
    case ModelKind::kIr:
      return b.ir->idf().size();
    case ModelKind::kMf:
      return b.mf->items().rows();
  }
  return 0;
}

int CmdEval(const EvalOptions& o, std::ostream& out) {
  std::optional<Breakdown> breakdown;
  if (!o.breakdown.empty()) {
    breakdown = ParseBreakdown(o.breakdown);
    if (!breakdown) throw UsageError("unknown breakdown '" + o.breakdown + "'");
  }
  if (!o.oracle && o.model.empty()) throw UsageError("--model is required unless --oracle");
  if (!fs::is_directory(o.data)) throw UsageError("data directory not found: " + o.data);
  const Vocabulary vocab = Vocabulary::Load(PathIn(o.data, "vocab.tsv"));
  const KnowledgeBase kb = LoadKbIfPresent(o.data);
  const std::vector<Example> examples = ReadSplit(o.data, o.split);

  ModelBundle bundle;
  OracleScorer oracle;
  const Scorer* scorer = &oracle;
  if (!o.oracle) {
    bundle = LoadModel(o.model);
    if (ModelVocabSize(bundle) != vocab.size()) {
      throw DataError("model vocabulary size " + std::to_string(ModelVocabSize(bundle)) +
                      " does not match dataset vocabulary " + std::to_string(vocab.size()));
    }
    scorer = &bundle.scorer();
  }
  const Encoder encoder(vocab, &kb, bundle.config.memory,
                        !o.oracle && bundle.kind() == ModelKind::kMemN2N);
  const auto encoded = encoder.EncodeAll(examples);
  const int threads =
      o.threads > 0 ? o.threads
                    : static_cast<int>(std::clamp(std::thread::hardware_concurrency(), 1u, 8u));
  const EvalReport report = Evaluate(*scorer, encoded, examples, vocab, o.k, threads);
  const std::string text = report.ToText(breakdown);
  out << text;
  if (!o.out.empty()) {
    if (fs::path(o.out).has_parent_path()) fs::create_directories(fs::path(o.out).parent_path());
    WriteText(o.out + ".txt", text);
    WriteText(o.out + ".tsv", report.ToTsv());
    Manifest m;
    m.Add("command", "eval");
    m.Add("data", o.data);
    m.Add("split", o.split);
    m.Add("model", o.oracle ? "oracle" : o.model);
    m.Add("k", o.k > 0 ? std::to_string(o.k) : "task default");
    m.Add("seed", bundle.config.seed);
    m.Save(o.out + ".manifest.txt");
  }
  return kExitOk;
}

// ---------------------------------------------------------------- chat

int CmdChat(const ChatOptions& o, std::istream& in, std::ostream& out) {
  const Vocabulary vocab = Vocabulary::Load(PathIn(o.data, "vocab.tsv"));
  const KnowledgeBase kb = LoadKbIfPresent(o.data);
  const ModelBundle bundle = LoadModel(o.model);
  if (ModelVocabSize(bundle) != vocab.size()) {
    throw DataError("model does not match the dataset vocabulary");
  }
  CandidateSpec spec = CandidateSpec::AllEntities();
  if (!o.pool.empty()) {
    spec = CandidateSpec::Explicit(
        o.pool, std::make_shared<const std::vector<std::string>>(ReadPool(o.data, o.pool)));
  }
  const Encoder encoder(vocab, &kb, bundle.config.memory);
  std::ofstream transcript;
  if (!o.transcript.empty()) {
    transcript.open(o.transcript, std::ios::app);
    if (!transcript) throw DataError("cannot open transcript " + o.transcript);
  }
  std::vector<Turn> history;
  std::string line;
  while (true) {
    out << "> " << std::flush;
    if (!std::getline(in, line)) break;
    const std::string text = SanitizeUtterance(line);
    if (text == ":quit") break;
    if (text.empty()) continue;
    const EncodedExample ex = encoder.EncodeQuery(history, text, spec);
    const std::vector<double> scores = bundle.scorer().Score(ex);
    const std::vector<int> ranked = RankCandidates(scores);
    const std::string reply = ranked.empty() ? "" : ex.candidate_text(ranked.front());
    out << reply << '\n';
    if (transcript) transcript << "user: " << text << "\nbot: " << reply << '\n';
    history.push_back({text, reply});
  }
  return kExitOk;
}

// ---------------------------------------------------------------- report

int CmdReport(const ReportOptions& o, std::ostream& out) {
  // cells[partition cell] -> per-file "percent (count)"
  std::vector<std::string> order;
  std::map<std::string, std::vector<std::string>> cells;
  for (size_t f = 0; f < o.inputs.size(); ++f) {
    std::ifstream in(o.inputs[f]);
    if (!in) throw DataError("cannot open " + o.inputs[f]);
    std::string line;
    for (int n = 1; std::getline(in, line); ++n) {
      std::istringstream row(line);
      std::string partition, cell, hits, count;
      if (!std::getline(row, partition, '\t') || !std::getline(row, cell, '\t') ||
          !std::getline(row, hits, '\t') || !std::getline(row, count)) {
        throw DataError(o.inputs[f] + ":" + std::to_string(n) + ": expected 4 fields");
      }
      if (partition != o.partition) continue;
      auto [it, inserted] = cells.try_emplace(cell, o.inputs.size(), "-");
      if (inserted) order.push_back(cell);
      if (count != "0") {
        std::ostringstream v;
        v << std::fixed << std::setprecision(1) << std::stod(hits);
        it->second[f] = v.str();
      }
    }
  }
  size_t w_cell = 4;
  for (const std::string& c : order) w_cell = std::max(w_cell, c.size());
  std::vector<size_t> widths;
  out << std::left << std::setw(w_cell + 2) << "cell";
  for (const std::string& p : o.inputs) {
    const std::string name = fs::path(p).stem().string();
    widths.push_back(std::max<size_t>(8, name.size() + 2));
    out << std::right << std::setw(widths.back()) << name;
  }
  out << '\n';
  for (const std::string& c : order) {
    out << std::left << std::setw(w_cell + 2) << c;
    for (size_t f = 0; f < o.inputs.size(); ++f) {
      out << std::right << std::setw(widths[f]) << cells[c][f];
    }
    out << '\n';
  }
  return kExitOk;
}

}  // namespace

uint64_t ResolveSeed(std::optional<uint64_t> flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv("DIALEVAL_SEED"); env && *env) {
    const std::string s(env);
    uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
      throw UsageError("DIALEVAL_SEED is not an unsigned integer: '" + s + "'");
    }
    return v;
  }
  return 1;
}

int RunCli(int argc, const char* const* argv, std::istream& in, std::ostream& out,
           std::ostream& err) {
  CLI::App app{"Goal-oriented movie dialog benchmark: generate, train, evaluate."};
  app.name("dialeval");
  app.require_subcommand(1);

  GenOptions gen;
  auto* g = app.add_subcommand("gen", "Generate a task dataset");
  g->add_option("--task", gen.task, "qa, recs, qarecs, discussion or joint")->required();
  g->add_option("--out", gen.out, "Output dataset directory")->required();
  g->add_flag("--synthetic", gen.synthetic, "Generate synthetic sources");
  g->add_option("--movies", gen.movies, "Synthetic movie count");
  g->add_option("--people", gen.people, "Synthetic people count");
  g->add_option("--users", gen.users, "Synthetic user count");
  g->add_option("--threads", gen.threads, "Synthetic discussion thread count");
  g->add_option("--mention-prob", gen.mention_prob, "Entity mention probability in threads");
  g->add_option("--kb", gen.kb_path, "Triples file");
  g->add_option("--ratings", gen.ratings_path, "Ratings file");
  g->add_option("--threads-file", gen.threads_path, "Discussion records (JSON lines)");
  g->add_option("--templates", gen.templates_path, "Template file");
  g->add_option("--train", gen.n_train, "Training examples (dialogs for qarecs)");
  g->add_option("--dev", gen.n_dev, "Development examples");
  g->add_option("--test", gen.n_test, "Test examples");
  g->add_option("--pool-size", gen.pool_size, "Negative pool size for discussion dev/test");
  g->add_option("--min-freq", gen.min_freq, "Minimum unigram frequency");
  g->add_option("--proportions", gen.proportions, "Joint mixture: qa,recs,qarecs,discussion")
      ->delimiter(',');
  g->add_option("--seed", gen.seed, "Random seed (default: $DIALEVAL_SEED or 1)");

  TrainOptions tr;
  auto* t = app.add_subcommand("train", "Train a model on a dataset's training split");
  t->add_option("--data", tr.data, "Dataset directory")->required();
  t->add_option("--model", tr.model, "supemb, memn2n, ir or mf");
  t->add_option("--out", tr.out, "Model file")->required();
  t->add_option("--log", tr.log, "Per-epoch loss log (default: <out>.log)");
  t->add_option("--epochs", tr.cfg.epochs, "Training epochs");
  t->add_option("--lr", tr.cfg.lambda, "Learning rate");
  t->add_option("--dim", tr.cfg.d, "Embedding dimension");
  t->add_option("--hops", tr.cfg.hops, "Memory hops K");
  t->add_option("--w", tr.cfg.w, "Number of distinct dictionaries");
  t->add_option("--margin", tr.cfg.margin, "Hinge margin");
  t->add_option("--n-neg", tr.cfg.n_neg, "Negatives per step");
  t->add_option("--init-std", tr.cfg.init_std, "Initialization standard deviation");
  t->add_option("--hash-n", tr.cfg.memory.hash_n, "Trailing messages hashed (0 = all)");
  t->add_option("--hash-cutoff", tr.cfg.memory.hash_cutoff, "Fact frequency cutoff");
  t->add_option("--max-memories", tr.cfg.memory.max_memories, "Long-term memory cap");
  t->add_flag("--no-kb", tr.no_kb, "Disable long-term KB memories");
  t->add_option("--ir-variant", tr.cfg.ir_variant, "TF-IDF variant: 1 or 2");
  t->add_flag("--ir-no-context", tr.ir_no_context, "TF-IDF query without context");
  t->add_option("--rf-weight", tr.cfg.rf_weight, "Relevance feedback weight");
  t->add_option("--mf-reg", tr.cfg.mf_reg, "Matrix factorization L2 weight");
  t->add_option("--seed", tr.seed, "Random seed (default: $DIALEVAL_SEED or 1)");

  EvalOptions ev;
  auto* e = app.add_subcommand("eval", "Evaluate hits@k on a split");
  e->add_option("--data", ev.data, "Dataset directory")->required();
  e->add_option("--model", ev.model, "Model file");
  e->add_option("--split", ev.split, "train, dev or test");
  e->add_option("--k", ev.k, "Cutoff (default: per task)");
  e->add_option("--breakdown", ev.breakdown, "type, position, entity or task");
  e->add_flag("--oracle", ev.oracle, "Score the gold answers first (harness check)");
  e->add_option("--threads", ev.threads, "Worker threads");
  e->add_option("--out", ev.out, "Report prefix: writes .txt and .tsv");

  ChatOptions ch;
  auto* c = app.add_subcommand("chat", "Interactive session against a trained model");
  c->add_option("--data", ch.data, "Dataset directory")->required();
  c->add_option("--model", ch.model, "Model file")->required();
  c->add_option("--pool", ch.pool, "Rank responses from candidates_<name>.txt");
  c->add_option("--transcript", ch.transcript, "Append the session to this file");

  ReportOptions rp;
  auto* r = app.add_subcommand("report", "Compare report TSV files side by side");
  r->add_option("inputs", rp.inputs, "Report .tsv files")->required();
  r->add_option("--partition", rp.partition, "overall, task, type, position or entity");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& ex) {
    const int code = app.exit(ex, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }
  try {
    if (*g) return CmdGen(gen, out, err);
    if (*t) return CmdTrain(tr, out);
    if (*e) return CmdEval(ev, out);
    if (*c) return CmdChat(ch, in, out);
    if (*r) return CmdReport(rp, out);
  } catch (const UsageError& ex) {
    err << "usage error: " << ex.what() << '\n';
    return kExitUsage;
  } catch (const NumericalError& ex) {
    err << "numerical error: " << ex.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& ex) {
    err << "error: " << ex.what() << '\n';
    return kExitData;
  }
  return kExitUsage;
}

}  // namespace dialeval
