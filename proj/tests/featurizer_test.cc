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

#include "odda/featurizer.h"

#include "gtest/gtest.h"
#include "odda/rng.h"

namespace odda {
namespace {

TEST(FeaturizerTest, EmptyTextGivesEmptyVector) {
  EXPECT_TRUE(Featurize("", 12, 2).entries.empty());
}

TEST(FeaturizerTest, RepeatedUnigramAccumulates) {
  const FeatureVector fv = Featurize("a a", 12, 1);
  ASSERT_EQ(fv.entries.size(), 1u);
  EXPECT_EQ(fv.entries[0].second, 2u);
  // 64-bit FNV-1a of "a" is 0xaf63dc4c8601ec8c; its low 12 bits are 0xc8c.
  EXPECT_EQ(fv.entries[0].first, 0xc8cu);
}

TEST(FeaturizerTest, BigramsUseASpaceJoinedKey) {
  const FeatureVector fv = Featurize("A b", 24, 2);
  const std::uint64_t mask = (1u << 24) - 1;
  std::vector<std::uint32_t> expected = {
      static_cast<std::uint32_t>(Fnv1a64("a") & mask),
      static_cast<std::uint32_t>(Fnv1a64("b") & mask),
      static_cast<std::uint32_t>(Fnv1a64("a b") & mask)};
  std::sort(expected.begin(), expected.end());
  ASSERT_EQ(fv.entries.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(fv.entries[i].first, expected[i]);
    EXPECT_EQ(fv.entries[i].second, 1u);
  }
}

TEST(FeaturizerTest, InvariantsOnRandomText) {
  SeededRng rng(31);
  const char* words[] = {"x", "y", "zz", "Hello,", "w0", "the"};
  for (int trial = 0; trial < 100; ++trial) {
    std::string text;
    const std::size_t n = rng.UniformIndex(20);
    for (std::size_t i = 0; i < n; ++i) text += std::string(words[rng.UniformIndex(6)]) + " ";
    for (int bits : {12, 18}) {
      const FeatureVector a = Featurize(text, bits, 2);
      EXPECT_EQ(a, Featurize(text, bits, 2));
      std::uint32_t total = 0;
      for (std::size_t i = 0; i < a.entries.size(); ++i) {
        EXPECT_LT(a.entries[i].first, 1u << bits);
        EXPECT_GE(a.entries[i].second, 1u);
        if (i > 0) EXPECT_LT(a.entries[i - 1].first, a.entries[i].first);
        total += a.entries[i].second;
      }
      EXPECT_EQ(total, n == 0 ? 0u : 2 * n - 1);
    }
  }
}

TEST(FeaturizerTest, RejectsBadParameters) {
  EXPECT_THROW(Featurize("a", 11, 1), std::invalid_argument);
  EXPECT_THROW(Featurize("a", 25, 1), std::invalid_argument);
  EXPECT_THROW(Featurize("a", 12, 3), std::invalid_argument);
}

}  // namespace
}  // namespace odda
