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

#include "odda/augment.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "gtest/gtest.h"
#include "odda/errors.h"
#include "odda/text.h"
#include "test_util.h"

namespace odda {
namespace {

using Tokens = std::vector<std::string>;

Lexicon SmallLexicon() {
  Lexicon lex;
  lex.synonyms["good"] = {"fine"};
  lex.synonyms["movie"] = {"film", "picture"};
  return lex;
}

Dataset Originals(int n) {
  Dataset d;
  d.label_names = {"neg", "pos"};
  for (int i = 0; i < n; ++i) {
    d.examples.push_back({i, "a good movie number " + std::to_string(i), i % 2, {}});
  }
  return d;
}

// Binomial 3-sigma band for `trials` Bernoulli(p) draws.
void ExpectBinomial(int count, int trials, double p) {
  const double mean = trials * p;
  const double sigma = std::sqrt(trials * p * (1 - p));
  EXPECT_NEAR(count, mean, 3 * sigma) << "p=" << p << " trials=" << trials;
}

TEST(SynonymReplaceTest, ZeroProbabilityIsIdentity) {
  SeededRng rng(1);
  const Tokens t = {"a", "good", "movie"};
  EXPECT_EQ(SynonymReplace(t, 0.0, SmallLexicon(), {}, rng), t);
}

TEST(SynonymReplaceTest, ForcedReplacement) {
  SeededRng rng(1);
  EXPECT_EQ(SynonymReplace({"good"}, 1.0, SmallLexicon(), {}, rng), Tokens{"fine"});
}

TEST(SynonymReplaceTest, StopwordsAreNeverReplaced) {
  SeededRng rng(1);
  const TokenSet stop = {"good"};
  EXPECT_EQ(SynonymReplace({"good"}, 1.0, SmallLexicon(), stop, rng), Tokens{"good"});
}

TEST(SynonymReplaceTest, Deterministic) {
  const Tokens t = {"good", "movie", "good", "movie"};
  SeededRng a(7), b(7);
  EXPECT_EQ(SynonymReplace(t, 0.5, SmallLexicon(), {}, a),
            SynonymReplace(t, 0.5, SmallLexicon(), {}, b));
}

TEST(RandomInsertTest, DegenerateCases) {
  SeededRng rng(1);
  const Tokens t = {"a", "good", "movie"};
  EXPECT_EQ(RandomInsert(t, 0.0, SmallLexicon(), {}, rng), t);
  EXPECT_EQ(RandomInsert({}, 1.0, SmallLexicon(), {}, rng), Tokens{});
  // No eligible token: nothing to insert.
  EXPECT_EQ(RandomInsert({"x", "y"}, 1.0, SmallLexicon(), {}, rng), (Tokens{"x", "y"}));
}

TEST(RandomInsertTest, InsertsSynonymsOnly) {
  SeededRng rng(3);
  int applied = 0;
  const Tokens out = RandomInsert({"good", "movie"}, 1.0, SmallLexicon(), {}, rng, &applied);
  EXPECT_EQ(applied, 2);
  ASSERT_EQ(out.size(), 4u);
  for (const auto& w : out) {
    EXPECT_TRUE(w == "good" || w == "movie" || w == "fine" || w == "film" || w == "picture")
        << w;
  }
}

TEST(RandomSwapDeleteTest, SingleTokenUnchanged) {
  SeededRng rng(1);
  EXPECT_EQ(RandomSwap({"x"}, 1.0, rng), Tokens{"x"});
  EXPECT_EQ(RandomDelete({"x"}, 1.0, rng), Tokens{"x"});
}

TEST(RandomSwapDeleteTest, LastTokenGuard) {
  SeededRng rng(1);
  EXPECT_EQ(RandomDelete({"a", "b", "c", "d", "e"}, 1.0, rng).size(), 1u);
}

TEST(RandomSwapDeleteTest, SwapPreservesMultiset) {
  SeededRng rng(4);
  Tokens t = {"a", "b", "b", "c", "d", "e", "f"};
  for (int i = 0; i < 50; ++i) {
    Tokens out = RandomSwap(t, 0.7, rng);
    std::sort(out.begin(), out.end());
    EXPECT_EQ(out, t);
  }
}

TEST(RandomSwapDeleteTest, DeleteKeepsOrder) {
  SeededRng rng(4);
  const Tokens t = {"a", "b", "c", "d", "e", "f", "g", "h"};
  for (int i = 0; i < 50; ++i) {
    const Tokens out = RandomDelete(t, 0.5, rng);
    EXPECT_TRUE(std::includes(t.begin(), t.end(), out.begin(), out.end()));
  }
}

class EdaRateTest : public ::testing::TestWithParam<double> {};

// Each op is one Bernoulli trial per eligible token, so over 10k trials the
// application count is Binomial(10k, p).
TEST_P(EdaRateTest, PerOpApplicationCountsAreBinomial) {
  const double p = GetParam();
  constexpr int kTrials = 10000;
  const Tokens tokens(100, "good");
  const Lexicon lex = SmallLexicon();
  int sr = 0, ri = 0, rs = 0, rd = 0;
  for (int i = 0; i < kTrials / 100; ++i) {
    SeededRng rng(11, "rate", i);
    SynonymReplace(tokens, p, lex, {}, rng, &sr);
    RandomInsert(tokens, p, lex, {}, rng, &ri);
    RandomSwap(tokens, p, rng, &rs);
    RandomDelete(tokens, p, rng, &rd);
  }
  ExpectBinomial(sr, kTrials, p);
  ExpectBinomial(ri, kTrials, p);
  ExpectBinomial(rs, kTrials, p);
  ExpectBinomial(rd, kTrials, p);
}

TEST_P(EdaRateTest, FlipCountsAreBinomial) {
  const double p = GetParam();
  Dataset aug;
  aug.label_names = {"neg", "pos"};
  for (int i = 0; i < 10000; ++i) aug.examples.push_back({i, "t", i % 2, i / 3});
  const Dataset flipped = FlipLabels(aug, {p, 99});
  int changed = 0;
  for (std::size_t i = 0; i < aug.size(); ++i) {
    changed += flipped.examples[i].label != aug.examples[i].label;
    EXPECT_EQ(flipped.examples[i].text, aug.examples[i].text);
    EXPECT_EQ(flipped.examples[i].origin_id, aug.examples[i].origin_id);
  }
  ExpectBinomial(changed, 10000, p);
}

INSTANTIATE_TEST_SUITE_P(Rates, EdaRateTest, ::testing::Values(0.05, 0.5));

TEST(FlipLabelsTest, Extremes) {
  Dataset aug;
  aug.label_names = {"neg", "pos"};
  for (int i = 0; i < 100; ++i) aug.examples.push_back({i, "t", i % 2, i});
  EXPECT_EQ(FlipLabels(aug, {0.0, 1}), aug);
  const Dataset all = FlipLabels(aug, {1.0, 1});
  for (std::size_t i = 0; i < aug.size(); ++i) {
    EXPECT_EQ(all.examples[i].label, 1 - aug.examples[i].label);
  }
}

TEST(FlipLabelsTest, MulticlassFlipsAreUniformOverOtherClasses) {
  Dataset aug;
  aug.label_names = {"a", "b", "c", "d"};
  for (int i = 0; i < 12000; ++i) aug.examples.push_back({i, "t", 0, i});
  const Dataset out = FlipLabels(aug, {1.0, 5});
  std::map<int, int> counts;
  for (const auto& e : out.examples) ++counts[e.label];
  EXPECT_EQ(counts.count(0), 0u);
  for (int c = 1; c < 4; ++c) ExpectBinomial(counts[c], 12000, 1.0 / 3);
}

TEST(FlipLabelsTest, RejectsBadProbability) {
  Dataset aug = Originals(2);
  EXPECT_THROW(FlipLabels(aug, {1.5, 1}), ConfigError);
}

TEST(EdaAugmentTest, ZeroProbabilitiesGiveVerbatimCopies) {
  EdaConfig config;
  config.p_sr = config.p_ri = config.p_rs = config.p_rd = 0.0;
  config.k = 3;
  const Dataset d = Originals(10);
  const Dataset out = EdaAugment(d, config, 1);
  ASSERT_EQ(out.size(), 30u);
  for (std::size_t i = 0; i < out.size(); ++i) {
    const auto& src = d.examples[i / 3];
    EXPECT_EQ(out.examples[i].id, static_cast<std::int64_t>(i));
    EXPECT_EQ(out.examples[i].origin_id, src.id);
    EXPECT_EQ(out.examples[i].label, src.label);
    EXPECT_EQ(out.examples[i].text, src.text);
  }
}

TEST(EdaAugmentTest, SizeLabelsAndDeterminism) {
  EdaConfig config;
  config.lexicon = SmallLexicon();
  config.p_sr = config.p_ri = config.p_rs = config.p_rd = 0.3;
  config.k = 4;
  const Dataset d = Originals(25);
  const Dataset a = EdaAugment(d, config, 8);
  EXPECT_EQ(a.size(), 100u);
  EXPECT_EQ(a.label_names, d.label_names);
  for (const auto& e : a.examples) {
    EXPECT_FALSE(Tokenize(e.text).empty());
    EXPECT_EQ(e.label, d.examples[*e.origin_id].label);
  }
  EXPECT_EQ(ToJsonl(a), ToJsonl(EdaAugment(d, config, 8)));
  EXPECT_NE(ToJsonl(a), ToJsonl(EdaAugment(d, config, 9)));
  EXPECT_EQ(d, Originals(25));  // input untouched
}

TEST(EdaAugmentTest, NeverProducesEmptyText) {
  EdaConfig config;
  config.p_rd = 1.0;
  config.k = 2;
  Dataset d;
  d.label_names = {"x", "y"};
  d.examples = {{0, "!!!", 0, {}}, {1, "one", 1, {}}, {2, "many words here", 0, {}}};
  for (const auto& e : EdaAugment(d, config, 3).examples) EXPECT_FALSE(e.text.empty());
}

TEST(EdaConfigTest, Validation) {
  EdaConfig c;
  EXPECT_NO_THROW(c.Validate());
  c.p_rs = -0.1;
  EXPECT_THROW(c.Validate(), ConfigError);
  c = EdaConfig{};
  c.k = 0;
  EXPECT_THROW(c.Validate(), ConfigError);
}

TEST(DropTokensTest, RemovesTargetsButNeverEmptiesText) {
  Dataset aug;
  aug.label_names = {"a", "b"};
  aug.examples = {{0, "sig x sig", 0, 0}, {1, "sig", 1, 1}};
  const Dataset out = DropTokens(aug, {"sig"}, 1.0, 2);
  EXPECT_EQ(out.examples[0].text, "x");
  EXPECT_EQ(out.examples[1].text, "sig");
  EXPECT_EQ(DropTokens(aug, {"sig"}, 0.0, 2).examples[0].text, "sig x sig");
}

TEST(AugmenterTest, IdentityAndExternal) {
  const Dataset d = Originals(3);
  const Dataset copies = MakeIdentityAugmenter(2)(d);
  ASSERT_EQ(copies.size(), 6u);
  EXPECT_EQ(copies.examples[3].text, d.examples[1].text);
  EXPECT_EQ(copies.examples[3].origin_id, 1);

  const auto dir = testing::TempDir();
  const auto path = testing::WriteFile(
      dir / "aug.jsonl",
      "{\"id\":0,\"text\":\"x\",\"label\":\"pos\",\"origin_id\":1}\n"
      "{\"id\":1,\"text\":\"y\",\"label\":\"neg\",\"origin_id\":7}\n"
      "{\"id\":2,\"text\":\"z\",\"label\":\"neg\"}\n");
  const Dataset ext = MakeExternalAugmenter(path)(d);
  ASSERT_EQ(ext.size(), 2u);
  EXPECT_EQ(ext.examples[0].text, "x");
  EXPECT_EQ(ext.examples[0].label, 1);
  EXPECT_FALSE(ext.examples[1].origin_id.has_value());
}

}  // namespace
}  // namespace odda
