//
// Copyright 2026 The ODDA Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#include "odda/commands.h"

#include <cstdlib>
#include <sstream>
#include <string>

#include "gtest/gtest.h"
#include "odda/errors.h"
#include "odda/synthetic.h"
#include "test_util.h"

#ifndef ODDA_CLI_PATH
#define ODDA_CLI_PATH ""
#endif

#define REQUIRE_CLI() \
  if (std::string(ODDA_CLI_PATH).empty()) GTEST_SKIP() << "command-line tool not built"

namespace odda {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

int RunCli(const std::string& args) {
  const std::string cmd = std::string(ODDA_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

// A small linear-model configuration over a generated corpus in `dir`.
fs::path WriteConfig(const fs::path& dir, int n = 120) {
  SyntheticSpec spec;
  spec.n = n;
  spec.n_test = 100;
  spec.vocab = 30;
  spec.noise_vocab = 60;
  spec.signal_strength = 0.3;
  WriteSynthetic(GenerateSynthetic(spec), dir);
  const json config = {
      {"data", {{"train", (dir / "train.tsv").string()}, {"test", (dir / "test.tsv").string()}}},
      {"augment",
       {{"lexicon", (dir / "lexicon.tsv").string()},
        {"stopwords", (dir / "stopwords.txt").string()}}},
      {"model", {{"architecture", "linear"}, {"hash_bits", 12}}},
      {"train",
       {{"teacher_steps", 30},
        {"student_steps", 30},
        {"eval_interval", 10},
        {"batch_size", 16},
        {"lr", 1.0}}}};
  testing::WriteFile(dir / "config.json", config.dump(2));
  return dir / "config.json";
}

CommandRequest Request(const std::string& command, const fs::path& config) {
  CommandRequest r;
  r.command = command;
  r.config = ResolveConfig(config.string(), {});
  r.seeds = {1, 2};
  return r;
}

TEST(CommandsTest, ManifestRoundTrip) {
  const auto dir = testing::TempDir();
  CommandRequest r = Request("sweep-noise", WriteConfig(dir));
  r.args = {{"p_n", {0.0, 0.5}}};
  r.threads = 2;
  const json m = ToManifest(r);
  const CommandRequest back = RequestFromManifest(m);
  EXPECT_EQ(ToManifest(back), m);
  EXPECT_THROW(RequestFromManifest(json{{"command", 3}}), ConfigError);
  EXPECT_THROW(RequestFromManifest(json::array()), ConfigError);
}

TEST(CommandsTest, GenSyntheticRecordsBayesAccuracy) {
  REQUIRE_CLI();
  const auto dir = testing::TempDir();
  ASSERT_EQ(RunCli("gen-synthetic --signal-strength 0 --classes 4 --n 40 --out " +
                   (dir / "g").string()),
            0);
  const json manifest = json::parse(testing::ReadFile(dir / "g" / "manifest.json"));
  EXPECT_DOUBLE_EQ(manifest.at("bayes_accuracy").get<double>(), 0.25);
  EXPECT_TRUE(fs::exists(dir / "g" / "train.tsv"));
  ASSERT_EQ(RunCli("gen-synthetic --signal-strength 0 --classes 4 --n 40 --out " +
                   (dir / "h").string()),
            0);
  EXPECT_EQ(testing::ReadFile(dir / "g" / "train.tsv"),
            testing::ReadFile(dir / "h" / "train.tsv"));
}

TEST(CommandsTest, AugmentWritesKPerExample) {
  const auto dir = testing::TempDir();
  CommandRequest r = Request("augment", WriteConfig(dir, 10));
  RunCommand(r, dir / "a");
  const std::string text = testing::ReadFile(dir / "a" / "augmented.jsonl");
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 30);
  RunCommand(r, dir / "b");
  EXPECT_EQ(text, testing::ReadFile(dir / "b" / "augmented.jsonl"));

  r.config.augment.p_sr = r.config.augment.p_ri = r.config.augment.p_rs =
      r.config.augment.p_rd = 0.0;
  RunCommand(r, dir / "c");
  const Dataset train = LoadDataset(dir / "train.tsv", DataFormat::kTsv);
  std::istringstream lines(testing::ReadFile(dir / "c" / "augmented.jsonl"));
  std::string line;
  int i = 0;
  while (std::getline(lines, line)) {
    EXPECT_EQ(json::parse(line).at("text"), train.examples[i++ / 3].text);
  }
}

TEST(CommandsTest, SweepNoiseTable) {
  const auto dir = testing::TempDir();
  CommandRequest r = Request("sweep-noise", WriteConfig(dir));
  r.args = {{"p_n", {0.0, 0.5}}, {"methods", {"odda_both", "eda"}}};
  RunCommand(r, dir / "s");
  const std::string table = testing::ReadFile(dir / "s" / "table.csv");
  std::istringstream lines(table);
  std::string header, both, eda;
  std::getline(lines, header);
  std::getline(lines, both);
  std::getline(lines, eda);
  EXPECT_EQ(header, "method,p_n=0,p_n=0.5");
  const auto cells = [](const std::string& row) {
    std::vector<std::string> out;
    std::stringstream ss(row);
    for (std::string c; std::getline(ss, c, ',');) out.push_back(c);
    return out;
  };
  const auto b = cells(both);
  ASSERT_EQ(b.size(), 3u);
  EXPECT_EQ(b[0], "odda_both");
  EXPECT_EQ(b[1], b[2]);
  EXPECT_EQ(cells(eda)[0], "eda");

  const auto runs = RunReportsFromCsv(testing::ReadFile(dir / "s" / "runs.csv"));
  const json report = json::parse(testing::ReadFile(dir / "s" / "report.json"));
  ASSERT_EQ(runs.size(), 4u);
  for (std::size_t i = 0; i < runs.size(); ++i) {
    const RunReport from_json = RunReportFromJson(report.at("reports").at(i));
    EXPECT_EQ(runs[i].per_seed, from_json.per_seed);
    EXPECT_EQ(runs[i].cell, from_json.cell);
  }

  r.args = {{"p_n", {0.0}}};
  RunCommand(r, dir / "one");
  std::istringstream one(testing::ReadFile(dir / "one" / "table.csv"));
  std::getline(one, header);
  EXPECT_EQ(header, "method,p_n=0");
}

TEST(CommandsTest, AblateGrid) {
  const auto dir = testing::TempDir();
  CommandRequest r = Request("ablate", WriteConfig(dir));
  r.args = {{"m", {2, 3}}};
  RunCommand(r, dir / "ab");
  const json report = json::parse(testing::ReadFile(dir / "ab" / "report.json"));
  ASSERT_EQ(report.at("reports").size(), 2u);
  const json timing = json::parse(testing::ReadFile(dir / "ab" / "timing.json"));
  EXPECT_EQ(timing.at("runtime_seconds").size(), 2u);
  EXPECT_EQ(report.dump().find("seconds"), std::string::npos);

  // A one-cell grid is a plain training run.
  r.args = json::object();
  RunCommand(r, dir / "cell");
  CommandRequest train = r;
  train.command = "train";
  RunCommand(train, dir / "train");
  const json a = json::parse(testing::ReadFile(dir / "cell" / "report.json"));
  const json t = json::parse(testing::ReadFile(dir / "train" / "report.json"));
  EXPECT_EQ(a.at("reports")[0].at("per_seed"), t.at("reports")[0].at("per_seed"));

  r.args = {{"tau", json::array()}};
  EXPECT_THROW(RunCommand(r, dir / "empty"), ConfigError);
}

TEST(CommandsTest, TrainThenEvalCheckpoint) {
  const auto dir = testing::TempDir();
  CommandRequest r = Request("train", WriteConfig(dir));
  RunCommand(r, dir / "t");
  const json report = json::parse(testing::ReadFile(dir / "t" / "report.json"));
  const auto ckpt = dir / "t" / "checkpoints" / "odda_both_seed2.ckpt";
  ASSERT_TRUE(fs::exists(ckpt)) << "checkpoints: " << dir / "t";
  EXPECT_TRUE(fs::exists(dir / "t" / "train_log.jsonl"));

  CommandRequest e;
  e.command = "eval";
  e.args = {{"checkpoint", ckpt.string()}, {"data", (dir / "test.tsv").string()}};
  RunCommand(e, dir / "e");
  const json eval = json::parse(testing::ReadFile(dir / "e" / "report.json"));
  EXPECT_EQ(eval.at("macro_f1"), report.at("reports")[0].at("per_seed")[1].at("macro_f1"));
}

TEST(CommandsTest, ReplayIsByteIdentical) {
  REQUIRE_CLI();
  const auto dir = testing::TempDir();
  const auto config = WriteConfig(dir);
  ASSERT_EQ(RunCli("sweep-noise --config " + config.string() +
                   " --seeds 1,2 --pn 0,0.3 --methods odda_both,eda --threads 2 --out " +
                   (dir / "first").string()),
            0);
  ASSERT_EQ(RunCli("replay " + (dir / "first" / "manifest.json").string() + " --out " +
                   (dir / "second").string()),
            0);
  ASSERT_EQ(RunCli("replay " + (dir / "first" / "manifest.json").string() +
                   " --threads 1 --out " + (dir / "third").string()),
            0);
  const std::string first = testing::ReadFile(dir / "first" / "report.json");
  EXPECT_FALSE(first.empty());
  EXPECT_EQ(first, testing::ReadFile(dir / "second" / "report.json"));
  EXPECT_EQ(first, testing::ReadFile(dir / "third" / "report.json"));
  EXPECT_EQ(testing::ReadFile(dir / "first" / "train_log.jsonl"),
            testing::ReadFile(dir / "third" / "train_log.jsonl"));
}

TEST(CommandsTest, ExitCodes) {
  REQUIRE_CLI();
  const auto dir = testing::TempDir();
  const auto config = WriteConfig(dir);
  const std::string out = " --out " + (dir / "o").string();
  EXPECT_EQ(RunCli("train --config " + config.string() + " --seeds 1" + out), 0);
  EXPECT_EQ(RunCli("train --config " + config.string() + " --set od.temp=2" + out), 2);
  EXPECT_EQ(RunCli("train --config " + config.string() + " --set od.tau=-1" + out), 2);
  EXPECT_EQ(RunCli("fly"), 2);
  EXPECT_EQ(RunCli("train --config " + config.string() + " --set data.train=" +
                   (dir / "missing.tsv").string() + out),
            3);
  EXPECT_EQ(RunCli("train --config " + config.string() + " --seeds 1 --set train.lr=1e308" + out),
            4);
  EXPECT_EQ(RunCli("--help"), 0);
}

TEST(CommandsTest, ExitCodeMapping) {
  EXPECT_EQ(ExitCodeFor(ConfigError("x")), 2);
  EXPECT_EQ(ExitCodeFor(DataError("x")), 3);
  EXPECT_EQ(ExitCodeFor(NumericError("x")), 4);
  EXPECT_EQ(ExitCodeFor(std::invalid_argument("x")), 2);
  EXPECT_EQ(ExitCodeFor(std::runtime_error("x")), 1);
}

}  // namespace
}  // namespace odda
