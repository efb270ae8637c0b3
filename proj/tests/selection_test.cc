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

#include "odda/selection.h"

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "gtest/gtest.h"
#include "odda/losses.h"

namespace odda {
namespace {

// `per_origin` candidates for each of `origins` originals; candidate ids are
// consecutive within an origin.
Dataset Pool(int origins, int per_origin) {
  Dataset d;
  d.label_names = {"a", "b"};
  for (int o = 0; o < origins; ++o) {
    for (int j = 0; j < per_origin; ++j) {
      const std::int64_t id = o * per_origin + j;
      d.examples.push_back({id, "c" + std::to_string(id), o % 2, o});
    }
  }
  return d;
}

std::vector<std::int64_t> Ids(const Dataset& d) {
  std::vector<std::int64_t> ids;
  for (const auto& e : d.examples) ids.push_back(e.id);
  return ids;
}

TEST(SelectionTest, OrderingExamples) {
  const Dataset pool = Pool(1, 3);
  const std::vector<double> losses = {3, 1, 2};
  EXPECT_EQ(Ids(GlitterSelect(pool, losses, 2)), (std::vector<std::int64_t>{0, 2}));
  EXPECT_EQ(Ids(SmallLossSelect(pool, losses, 2)), (std::vector<std::int64_t>{1, 2}));
  EXPECT_EQ(GlitterSelect(pool, losses, 3), pool);
  EXPECT_EQ(SmallLossSelect(pool, losses, 3), pool);
}

TEST(SelectionTest, TiesGoToLowerIds) {
  const Dataset pool = Pool(2, 4);
  const std::vector<double> losses(8, 0.5);
  EXPECT_EQ(Ids(GlitterSelect(pool, losses, 2)), (std::vector<std::int64_t>{0, 1, 4, 5}));
  EXPECT_EQ(Ids(SmallLossSelect(pool, losses, 2)), (std::vector<std::int64_t>{0, 1, 4, 5}));
}

// With distinct scores, the k largest and the (n - k) smallest partition each
// origin's candidates.
TEST(SelectionTest, LargestAndSmallestAreComplementary) {
  const Dataset pool = Pool(5, 6);
  std::vector<double> losses;
  for (int i = 0; i < 30; ++i) losses.push_back(std::fmod(i * 7.31, 5.0));
  const auto big = Ids(GlitterSelect(pool, losses, 2));
  const auto small = Ids(SmallLossSelect(pool, losses, 4));
  EXPECT_EQ(big.size(), 10u);
  std::set<std::int64_t> all(big.begin(), big.end());
  all.insert(small.begin(), small.end());
  EXPECT_EQ(all.size(), 30u);
  for (std::size_t i = 0; i < 5; ++i) {
    double min_big = 1e9, max_small = -1e9;
    for (auto id : big) {
      if (id / 6 == static_cast<std::int64_t>(i)) min_big = std::min(min_big, losses[id]);
    }
    for (auto id : small) {
      if (id / 6 == static_cast<std::int64_t>(i)) max_small = std::max(max_small, losses[id]);
    }
    EXPECT_GT(min_big, max_small);
  }
}

TEST(SelectionTest, Errors) {
  const Dataset pool = Pool(2, 2);
  const std::vector<double> losses = {1, 2, 3, 4};
  EXPECT_THROW(GlitterSelect(pool, losses, 3), std::invalid_argument);
  Dataset unmapped = pool;
  unmapped.examples[1].origin_id.reset();
  EXPECT_THROW(GlitterSelect(unmapped, losses, 1), std::invalid_argument);
  EXPECT_THROW(GlitterSelect(pool, std::vector<double>{1.0}, 1), std::invalid_argument);
}

TEST(EpidaStubTest, KeepsMostDivergentCandidates) {
  const Dataset pool = Pool(2, 3);
  const std::vector<ProbVector> origin_probs = {{0.9, 0.1}, {0.2, 0.8}};
  const std::vector<std::int64_t> origin_ids = {0, 1};
  const std::vector<ProbVector> cand = {{0.9, 0.1}, {0.1, 0.9}, {0.6, 0.4},
                                        {0.3, 0.7}, {0.2, 0.8}, {0.95, 0.05}};
  const Dataset kept = EpidaStubSelect(pool, cand, origin_ids, origin_probs, 1);
  EXPECT_EQ(Ids(kept), (std::vector<std::int64_t>{1, 5}));
}

TEST(CandidateLossesTest, MatchesHardCrossEntropy) {
  ModelConfig config;
  config.architecture = Architecture::kMlp1;
  config.hash_bits = 12;
  config.hidden = 4;
  const Classifier model = Classifier::Initialize(config, 3);
  const Dataset pool = Pool(2, 2);
  std::vector<FeatureVector> x;
  for (const auto& e : pool.examples) x.push_back(Featurize(e.text, 12, 2));
  const auto losses = CandidateLosses(model, pool, x);
  ASSERT_EQ(losses.size(), 4u);
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_EQ(losses[i], HardCe(Softmax(model.Forward(x[i])), pool.examples[i].label));
  }
}

}  // namespace
}  // namespace odda
