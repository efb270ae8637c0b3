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

#ifndef ODDA_FEATURIZER_H_
#define ODDA_FEATURIZER_H_

#include <cstdint>
#include <string_view>
#include <utility>
#include <vector>

namespace odda {

// Sparse bag of hashed n-grams: (bucket, count) pairs sorted by bucket, every
// count >= 1 and every bucket < 2^hash_bits.
struct FeatureVector {
  std::vector<std::pair<std::uint32_t, std::uint32_t>> entries;

  bool empty() const { return entries.empty(); }
  std::size_t size() const { return entries.size(); }
  friend bool operator==(const FeatureVector&, const FeatureVector&) = default;
};

inline constexpr int kMinHashBits = 12;
inline constexpr int kMaxHashBits = 24;

// Tokenizes `text` (lowercase, whitespace, punctuation stripped) and hashes
// unigrams, plus "a b" bigrams when ngram_max == 2, with 64-bit FNV-1a masked
// to `hash_bits` bits. Throws std::invalid_argument for hash_bits outside
// [12, 24] or ngram_max outside {1, 2}.
FeatureVector Featurize(std::string_view text, int hash_bits, int ngram_max);

}  // namespace odda

#endif  // ODDA_FEATURIZER_H_
