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

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <sstream>

#include "dialeval/cli/cli.h"
#include "dialeval/errors.h"
#include "dialeval/models/model_io.h"
#include "dialeval/text/vocabulary.h"
#include "test_util.h"

namespace dialeval {
namespace {

namespace fs = std::filesystem;

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun Cli(std::vector<std::string> args, const std::string& input = "") {
  args.insert(args.begin(), "dialeval");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::istringstream in(input);
  std::ostringstream out, err;
  const int code = RunCli(static_cast<int>(argv.size()), argv.data(), in, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> SmallGen(const std::string& dir, const std::string& task = "qa") {
  return {"gen", "--task", task, "--synthetic", "--movies", "30", "--people", "40",
          "--users", "30", "--threads", "60", "--train", "200", "--dev", "20", "--test", "20",
          "--pool-size", "20", "--seed", "7", "--out", dir};
}

// One dataset and model shared by the slower tests.
const std::string& QaData() {
  static const std::string dir = [] {
    const std::string d = testing::TempDir("cli_qa");
    const CliRun r = Cli(SmallGen(d + "/data"));
    EXPECT_EQ(r.code, 0) << r.err;
    const CliRun t = Cli({"train", "--data", d + "/data", "--model", "memn2n", "--epochs", "3",
                       "--dim", "8", "--out", d + "/model.bin"});
    EXPECT_EQ(t.code, 0) << t.err;
    return d;
  }();
  return dir;
}

TEST(CliTest, UsageErrors) {
  EXPECT_EQ(Cli({}).code, kExitUsage);
  EXPECT_EQ(Cli({"frobnicate"}).code, kExitUsage);
  EXPECT_EQ(Cli({"gen", "--task", "qa"}).code, kExitUsage);  // no --out
  EXPECT_EQ(Cli({"gen", "--task", "nonsense", "--synthetic", "--out", "/tmp/x"}).code,
            kExitUsage);
  EXPECT_EQ(Cli({"train", "--data", "/nonexistent", "--bogus-flag"}).code, kExitUsage);
  EXPECT_EQ(Cli({"--help"}).code, kExitOk);
}

TEST(CliTest, RecsWithoutRatingsIsUsageError) {
  const std::string dir = testing::TempDir("cli_recs");
  testing::WriteFile(dir + "/kb.tsv", "alpha\tdirected_by\tann lee\n");
  const CliRun r = Cli({"gen", "--task", "recs", "--kb", dir + "/kb.tsv", "--out", dir + "/out"});
  EXPECT_EQ(r.code, kExitUsage);
  EXPECT_NE(r.err.find("ratings"), std::string::npos) << r.err;
}

TEST(CliTest, MissingPathIsUsageErrorAndBadDataIsDataError) {
  const std::string dir = testing::TempDir("cli_missing");
  EXPECT_EQ(Cli({"train", "--data", dir + "/nope", "--out", dir + "/m.bin"}).code, kExitUsage);
  EXPECT_EQ(Cli({"eval", "--data", dir + "/nope", "--model", dir + "/m.bin"}).code, kExitUsage);
  fs::create_directories(dir + "/bad");
  testing::WriteFile(dir + "/bad/vocab.tsv", "<null>\t0\tU\n<unk>\t0\tU\nx\tmany\tU\n");
  const CliRun r = Cli({"train", "--data", dir + "/bad", "--out", dir + "/m.bin"});
  EXPECT_EQ(r.code, kExitData) << r.err;
  EXPECT_NE(r.err.find("vocab.tsv:3"), std::string::npos) << r.err;
}

TEST(CliTest, GenIsDeterministic) {
  const std::string dir = testing::TempDir("cli_det");
  for (const char* task : {"qa", "qarecs", "discussion"}) {
    ASSERT_EQ(Cli(SmallGen(dir + "/a", task)).code, 0);
    ASSERT_EQ(Cli(SmallGen(dir + "/b", task)).code, 0);
    size_t files = 0;
    for (const auto& e : fs::directory_iterator(dir + "/a")) {
      const std::string name = e.path().filename().string();
      EXPECT_EQ(testing::ReadFile(e.path().string()),
                testing::ReadFile(dir + "/b/" + name))
          << task << " " << name;
      ++files;
    }
    EXPECT_GT(files, 5u);
    fs::remove_all(dir + "/a");
    fs::remove_all(dir + "/b");
  }
}

TEST(CliTest, SeedFallsBackToEnvironment) {
  EXPECT_EQ(ResolveSeed(42), 42u);
  ::setenv("DIALEVAL_SEED", "99", 1);
  EXPECT_EQ(ResolveSeed(std::nullopt), 99u);
  ::setenv("DIALEVAL_SEED", "x1", 1);
  EXPECT_THROW(ResolveSeed(std::nullopt), UsageError);
  ::unsetenv("DIALEVAL_SEED");
  EXPECT_EQ(ResolveSeed(std::nullopt), 1u);
}

TEST(CliTest, TrainWritesModelConfigAndLog) {
  const std::string& d = QaData();
  EXPECT_TRUE(fs::exists(d + "/model.bin"));
  EXPECT_TRUE(fs::exists(d + "/model.bin.cfg"));
  const std::string log = testing::ReadFile(d + "/model.bin.log");
  EXPECT_EQ(std::count(log.begin(), log.end(), '\n'), 3) << log;
  EXPECT_EQ(LoadModel(d + "/model.bin").kind(), ModelKind::kMemN2N);
}

TEST(CliTest, IrModelPersistsIdf) {
  const std::string& d = QaData();
  const CliRun r = Cli({"train", "--data", d + "/data", "--model", "ir", "--out", d + "/ir.bin"});
  ASSERT_EQ(r.code, 0) << r.err;
  const ModelBundle b = LoadModel(d + "/ir.bin");
  ASSERT_TRUE(b.ir);
  EXPECT_EQ(b.ir->idf().size(), Vocabulary::Load(d + "/data/vocab.tsv").size());
}

TEST(CliTest, ZeroHopsAccepted) {
  const std::string& d = QaData();
  const CliRun r = Cli({"train", "--data", d + "/data", "--model", "memn2n", "--hops", "0",
                     "--epochs", "1", "--dim", "4", "--out", d + "/k0.bin"});
  EXPECT_EQ(r.code, 0) << r.err;
}

TEST(CliTest, DivergenceIsNumericalError) {
  const std::string& d = QaData();
  const CliRun r = Cli({"train", "--data", d + "/data", "--model", "supemb", "--lr", "1e200",
                     "--margin", "1", "--epochs", "3", "--out", d + "/nan.bin"});
  EXPECT_EQ(r.code, kExitNumerical) << r.err;
}

TEST(CliTest, OracleEvalIsPerfect) {
  const std::string& d = QaData();
  const CliRun r = Cli({"eval", "--data", d + "/data", "--oracle", "--breakdown", "type"});
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream in(r.out);
  std::string line;
  std::getline(in, line);  // header
  int rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    if (line.find(" - ") == std::string::npos && line.find("-  ") == std::string::npos) {
      EXPECT_NE(line.find("100.0"), std::string::npos) << line;
    }
  }
  EXPECT_EQ(rows, 12);
}

TEST(CliTest, EvalWritesReportFiles) {
  const std::string& d = QaData();
  const CliRun r = Cli({"eval", "--data", d + "/data", "--model", d + "/model.bin", "--split",
                     "dev", "--breakdown", "type", "--out", d + "/report"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(fs::exists(d + "/report.txt"));
  EXPECT_TRUE(fs::exists(d + "/report.tsv"));
  EXPECT_TRUE(fs::exists(d + "/report.manifest.txt"));
  const CliRun rep = Cli({"report", d + "/report.tsv", d + "/report.tsv", "--partition", "type"});
  EXPECT_EQ(rep.code, 0) << rep.err;
  EXPECT_NE(rep.out.find("actor to movie"), std::string::npos);
}

TEST(CliTest, ChatQuitsAndSkipsEmptyLines) {
  const std::string& d = QaData();
  const std::string transcript = d + "/chat.txt";
  fs::remove(transcript);
  const CliRun r = Cli({"chat", "--data", d + "/data", "--model", d + "/model.bin", "--transcript",
                     transcript},
                    "who directed it?\n\n   \n:quit\nnever read\n");
  EXPECT_EQ(r.code, 0) << r.err;
  size_t prompts = 0;
  for (size_t p = r.out.find("> "); p != std::string::npos; p = r.out.find("> ", p + 2)) {
    ++prompts;
  }
  EXPECT_EQ(prompts, 4u);
  const std::string t = testing::ReadFile(transcript);
  EXPECT_EQ(std::count(t.begin(), t.end(), '\n'), 2) << t;
  EXPECT_EQ(t.find("never read"), std::string::npos);
  // End of input also ends the session cleanly.
  EXPECT_EQ(Cli({"chat", "--data", d + "/data", "--model", d + "/model.bin"}, "").code, 0);
}

}  // namespace
}  // namespace dialeval
