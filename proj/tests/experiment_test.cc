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

#include "odda/experiment.h"

#include <atomic>
#include <set>

#include "gtest/gtest.h"
#include "odda/errors.h"
#include "odda/synthetic.h"
#include "test_util.h"

namespace odda {
namespace {

ExperimentConfig SmallConfig(const std::filesystem::path& dir) {
  SyntheticSpec spec;
  spec.n = 120;
  spec.n_test = 100;
  spec.vocab = 30;
  spec.noise_vocab = 60;
  spec.signal_strength = 0.3;
  WriteSynthetic(GenerateSynthetic(spec), dir);
  ExperimentConfig c;
  c.data.train = (dir / "train.tsv").string();
  c.data.test = (dir / "test.tsv").string();
  c.augment.lexicon = (dir / "lexicon.tsv").string();
  c.augment.stopwords = (dir / "stopwords.txt").string();
  c.model.architecture = Architecture::kLinear;
  c.model.hash_bits = 12;
  c.train.teacher_steps = 40;
  c.train.student_steps = 40;
  c.train.eval_interval = 10;
  c.train.batch_size = 16;
  c.train.lr = 1.0;
  c.baseline.pool_k = 5;
  return c;
}

TEST(ExperimentTest, InputsAndErrors) {
  const auto dir = testing::TempDir();
  ExperimentConfig c = SmallConfig(dir);
  const ExperimentInputs in = LoadExperimentInputs(c);
  EXPECT_EQ(in.train.size(), 120u);
  EXPECT_EQ(in.test.label_names, in.train.label_names);
  EXPECT_FALSE(in.lexicon.synonyms.empty());
  EXPECT_EQ(in.stopwords.size(), 5u);
  c.data.train.clear();
  EXPECT_THROW(LoadExperimentInputs(c), ConfigError);
  c = SmallConfig(dir);
  c.data.test = (dir / "missing.tsv").string();
  EXPECT_THROW(LoadExperimentInputs(c), DataError);
}

TEST(ExperimentTest, PrepareData) {
  const auto dir = testing::TempDir();
  ExperimentConfig c = SmallConfig(dir);
  c.data.fraction = 0.5;
  const ExperimentInputs in = LoadExperimentInputs(c);
  const PreparedData d = PrepareData(in, c);
  EXPECT_EQ(d.train.size() + d.dev.size(), 60u);
  EXPECT_EQ(d.augmented.size(), 3 * d.train.size());
  std::set<std::int64_t> train_ids;
  for (const auto& e : d.train.examples) train_ids.insert(e.id);
  for (const auto& e : d.dev.examples) EXPECT_FALSE(train_ids.contains(e.id));
  for (const auto& e : d.augmented.examples) EXPECT_TRUE(train_ids.contains(*e.origin_id));

  c.method = Method::kGlitter;
  EXPECT_EQ(PrepareData(in, c).augmented.size(), 5 * d.train.size());
  c.method = Method::kSupervised;
  EXPECT_TRUE(PrepareData(in, c).augmented.empty());

  // Noise touches augmented labels only.
  c.method = Method::kOddaBoth;
  c.noise.p_n = 0.5;
  const PreparedData noisy = PrepareData(in, c);
  EXPECT_EQ(noisy.train, d.train);
  EXPECT_EQ(noisy.dev, d.dev);
  int flipped = 0;
  for (std::size_t i = 0; i < d.augmented.size(); ++i) {
    EXPECT_EQ(noisy.augmented.examples[i].text, d.augmented.examples[i].text);
    flipped += noisy.augmented.examples[i].label != d.augmented.examples[i].label;
  }
  EXPECT_GT(flipped, 0);
}

TEST(ExperimentTest, SingleSeedReportAndDeterminism) {
  const auto dir = testing::TempDir();
  const ExperimentConfig c = SmallConfig(dir);
  const ExperimentInputs in = LoadExperimentInputs(c);
  const RunReport one = RunExperiment(in, c, {3});
  ASSERT_EQ(one.per_seed.size(), 1u);
  EXPECT_EQ(one.mean_macro_f1, one.per_seed[0].macro_f1);
  EXPECT_EQ(one.std_macro_f1, 0.0);
  EXPECT_EQ(one.method, "odda_both");

  const RunReport a = RunExperiment(in, c, {1, 2, 3});
  ExperimentOptions threaded;
  threaded.threads = 3;
  const RunReport b = RunExperiment(in, c, {1, 2, 3}, threaded);
  EXPECT_EQ(ToJson(a).dump(), ToJson(b).dump());
  EXPECT_EQ(a.per_seed[2], one.per_seed[0]);
}

TEST(ExperimentTest, NoiseInvarianceAcrossTheWholePipeline) {
  const auto dir = testing::TempDir();
  ExperimentConfig c = SmallConfig(dir);
  const ExperimentInputs in = LoadExperimentInputs(c);
  const RunReport clean = RunExperiment(in, c, {1, 2});
  c.noise.p_n = 0.3;
  EXPECT_EQ(RunExperiment(in, c, {1, 2}).per_seed, clean.per_seed);
}

TEST(ExperimentTest, EveryMethodRuns) {
  const auto dir = testing::TempDir();
  ExperimentConfig c = SmallConfig(dir);
  const ExperimentInputs in = LoadExperimentInputs(c);
  for (const auto& name : AllMethodNames()) {
    c.method = ParseMethod(name);
    const RunReport r = RunExperiment(in, c, {1});
    EXPECT_EQ(r.method, name);
    EXPECT_GE(r.mean_macro_f1, 0.0);
    EXPECT_LE(r.mean_macro_f1, 1.0);
  }
}

TEST(ExperimentTest, CheckpointsAndLogs) {
  const auto dir = testing::TempDir();
  const ExperimentConfig c = SmallConfig(dir);
  const ExperimentInputs in = LoadExperimentInputs(c);
  std::atomic<int> records = 0;
  ExperimentOptions options;
  options.threads = 2;
  options.checkpoint_dir = dir / "ckpt";
  options.checkpoint_prefix = "x_";
  options.sink = [&](const TrainLogRecord&) { ++records; };
  const RunReport r = RunExperiment(in, c, {4, 5}, options);
  // 4 evaluations per phase, two phases, two seeds.
  EXPECT_EQ(records.load(), 16);
  for (std::uint64_t seed : {4, 5}) {
    const auto path = dir / "ckpt" / ("x_seed" + std::to_string(seed) + ".ckpt");
    ASSERT_TRUE(std::filesystem::exists(path));
    const Classifier model = Classifier::Load(path);
    const double f1 = Evaluate(model, in.test).macro_f1;
    EXPECT_EQ(f1, r.per_seed[seed - 4].macro_f1);
  }
}

TEST(ExperimentTest, FailuresNameTheSeed) {
  const auto dir = testing::TempDir();
  ExperimentConfig c = SmallConfig(dir);
  c.train.lr = 1e308;
  const ExperimentInputs in = LoadExperimentInputs(c);
  try {
    RunExperiment(in, c, {8, 9});
    FAIL() << "expected NumericError";
  } catch (const NumericError& e) {
    EXPECT_NE(std::string(e.what()).find("seed 8"), std::string::npos) << e.what();
  }
}

TEST(ExperimentTest, AugmenterSelection) {
  const auto dir = testing::TempDir();
  ExperimentConfig c = SmallConfig(dir);
  const ExperimentInputs in = LoadExperimentInputs(c);
  c.augment.name = "identity";
  c.augment.k = 2;
  const Dataset copies = MakeAugmenter(c, in, 1)(in.train);
  EXPECT_EQ(copies.size(), 240u);
  EXPECT_EQ(copies.examples[1].text, in.train.examples[0].text);
  c.augment.name = "external-file";
  EXPECT_THROW(MakeAugmenter(c, in, 1), ConfigError);
  c.augment.name = "backtranslate";
  EXPECT_THROW(MakeAugmenter(c, in, 1), ConfigError);
}

}  // namespace
}  // namespace odda
