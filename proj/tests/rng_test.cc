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

#include "odda/rng.h"

#include <array>
#include <cmath>
#include <numeric>
#include <set>
#include <vector>

#include "gtest/gtest.h"

namespace odda {
namespace {

TEST(RngTest, Fnv1aMatchesPublishedVectors) {
  EXPECT_EQ(Fnv1a64(""), 0xcbf29ce484222325ULL);
  EXPECT_EQ(Fnv1a64("a"), 0xaf63dc4c8601ec8cULL);
  EXPECT_EQ(Fnv1a64("foobar"), 0x85944171f73967e8ULL);
}

TEST(RngTest, SameStreamKeyReplaysIdentically) {
  SeededRng a(42, "augment", 7, 1);
  SeededRng b(42, "augment", 7, 1);
  for (int i = 0; i < 100; ++i) ASSERT_EQ(a.NextU64(), b.NextU64());
}

TEST(RngTest, StreamsDifferByTagAndKeys) {
  std::set<std::uint64_t> seeds = {
      DeriveSeed(1, "a"), DeriveSeed(1, "b"), DeriveSeed(2, "a"),
      DeriveSeed(1, "a", 1), DeriveSeed(1, "a", 0, 1), DeriveSeed(1, "a", 1, 1)};
  EXPECT_EQ(seeds.size(), 6u);
}

TEST(RngTest, UniformStaysInUnitInterval) {
  SeededRng rng(3);
  for (int i = 0; i < 10000; ++i) {
    const double u = rng.Uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
  }
}

TEST(RngTest, UniformIndexIsRoughlyUniform) {
  SeededRng rng(5);
  constexpr int kTrials = 60000;
  std::array<int, 6> counts{};
  for (int i = 0; i < kTrials; ++i) ++counts[rng.UniformIndex(6)];
  // Each count ~ Binomial(60000, 1/6); allow 4 sigma.
  const double mean = kTrials / 6.0;
  const double sigma = std::sqrt(kTrials * (1.0 / 6) * (5.0 / 6));
  for (int c : counts) EXPECT_NEAR(c, mean, 4 * sigma);
  EXPECT_THROW(rng.UniformIndex(0), std::invalid_argument);
}

TEST(RngTest, NormalHasUnitMoments) {
  SeededRng rng(11);
  constexpr int kTrials = 20000;
  double sum = 0, sq = 0;
  for (int i = 0; i < kTrials; ++i) {
    const double x = rng.Normal();
    sum += x;
    sq += x * x;
  }
  EXPECT_NEAR(sum / kTrials, 0.0, 4 / std::sqrt(kTrials));
  EXPECT_NEAR(sq / kTrials, 1.0, 0.05);
}

TEST(RngTest, ShuffleIsADeterministicPermutation) {
  std::vector<int> a(50), b(50);
  std::iota(a.begin(), a.end(), 0);
  b = a;
  SeededRng r1(9, "shuffle"), r2(9, "shuffle");
  r1.Shuffle(std::span<int>(a));
  r2.Shuffle(std::span<int>(b));
  EXPECT_EQ(a, b);
  std::vector<int> sorted = a;
  std::sort(sorted.begin(), sorted.end());
  std::vector<int> expected(50);
  std::iota(expected.begin(), expected.end(), 0);
  EXPECT_EQ(sorted, expected);
  EXPECT_NE(a, expected);
}

TEST(RngTest, ToUnitUsesTop53Bits) {
  EXPECT_EQ(ToUnit(0), 0.0);
  EXPECT_LT(ToUnit(~std::uint64_t{0}), 1.0);
  EXPECT_EQ(ToUnit(std::uint64_t{1} << 63), 0.5);
}

}  // namespace
}  // namespace odda
