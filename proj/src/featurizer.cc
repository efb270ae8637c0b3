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

#include <algorithm>
#include <stdexcept>
#include <string>

#include "odda/rng.h"
#include "odda/text.h"

namespace odda {

FeatureVector Featurize(std::string_view text, int hash_bits, int ngram_max) {
  if (hash_bits < kMinHashBits || hash_bits > kMaxHashBits) {
    throw std::invalid_argument("hash bits must lie in [12, 24]");
  }
  if (ngram_max != 1 && ngram_max != 2) {
    throw std::invalid_argument("ngram_max must be 1 or 2");
  }
  const std::uint64_t mask = (std::uint64_t{1} << hash_bits) - 1;
  const auto tokens = Tokenize(text);
  std::vector<std::uint32_t> buckets;
  buckets.reserve(tokens.size() * ngram_max);
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    buckets.push_back(static_cast<std::uint32_t>(Fnv1a64(tokens[i]) & mask));
    if (ngram_max == 2 && i + 1 < tokens.size()) {
      const std::string bigram = tokens[i] + " " + tokens[i + 1];
      buckets.push_back(static_cast<std::uint32_t>(Fnv1a64(bigram) & mask));
    }
  }
  std::sort(buckets.begin(), buckets.end());
  FeatureVector fv;
  for (std::uint32_t b : buckets) {
    if (!fv.entries.empty() && fv.entries.back().first == b) {
      ++fv.entries.back().second;
    } else {
      fv.entries.emplace_back(b, 1);
    }
  }
  return fv;
}

}  // namespace odda
