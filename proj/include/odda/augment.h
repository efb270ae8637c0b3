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

#ifndef ODDA_AUGMENT_H_
#define ODDA_AUGMENT_H_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include "odda/dataset.h"
#include "odda/rng.h"

namespace odda {

using TokenSet = std::set<std::string, std::less<>>;

// EDA edit probabilities are per token: each eligible token is an independent
// Bernoulli trial.
struct EdaConfig {
  double p_sr = 0.05;
  double p_ri = 0.05;
  double p_rs = 0.05;
  double p_rd = 0.05;
  int k = 3;
  Lexicon lexicon;
  TokenSet stopwords;

  // Throws ConfigError unless probabilities lie in [0, 1] and k >= 1.
  void Validate() const;
};

struct NoiseConfig {
  double p_n = 0.0;
  std::uint64_t seed = 0;
};

// Each op optionally reports how many edits it applied through `applied`.

// Replaces each non-stopword token that has a lexicon entry, with probability
// p, by a uniformly chosen synonym.
std::vector<std::string> SynonymReplace(std::vector<std::string> tokens,
                                        double p, const Lexicon& lexicon,
                                        const TokenSet& stopwords,
                                        SeededRng& rng, int* applied = nullptr);

// One trial per original token: with probability p, a synonym of a random
// eligible token is inserted at a random position. No eligible token means no
// insertion.
std::vector<std::string> RandomInsert(std::vector<std::string> tokens, double p,
                                      const Lexicon& lexicon,
                                      const TokenSet& stopwords, SeededRng& rng,
                                      int* applied = nullptr);

// One trial per token: with probability p, two uniformly chosen positions are
// exchanged.
std::vector<std::string> RandomSwap(std::vector<std::string> tokens, double p,
                                    SeededRng& rng, int* applied = nullptr);

// Drops each token independently with probability p, except that the last
// remaining token is never dropped.
std::vector<std::string> RandomDelete(std::vector<std::string> tokens, double p,
                                      SeededRng& rng, int* applied = nullptr);

// Applies SR -> RI -> RS -> RD to one text. Falls back to the input text when
// tokenization leaves nothing, so the result is never empty.
std::string EdaAugmentText(const std::string& text, const EdaConfig& config,
                           SeededRng& rng);

// k augmentations per example, each from its own stream keyed by
// (seed, example id, j). Output ids are i * k + j for the i-th example;
// labels and origin ids are copied from the source example.
Dataset EdaAugment(const Dataset& dataset, const EdaConfig& config,
                   std::uint64_t seed);

// Replaces each label independently with probability p_n by a different class
// (uniform over the other classes). Texts and ids are untouched.
Dataset FlipLabels(const Dataset& augmented, const NoiseConfig& config);

// Deletes occurrences of `targets` from every text with probability `rate`,
// never leaving a text without tokens.
Dataset DropTokens(const Dataset& augmented, const TokenSet& targets,
                   double rate, std::uint64_t seed);

// Any Dataset -> augmented Dataset transformation. Implementations that cannot
// map outputs back to sources leave origin_id empty.
using Augmenter = std::function<Dataset(const Dataset& originals)>;

Augmenter MakeEdaAugmenter(EdaConfig config, std::uint64_t seed);
// k verbatim copies of every example.
Augmenter MakeIdentityAugmenter(int k);
// A pre-generated augmentation file (JSONL with optional origin_id). Mapped
// records whose origin is absent from `originals` are discarded; unmapped
// records are all kept.
Augmenter MakeExternalAugmenter(std::filesystem::path path);

}  // namespace odda

#endif  // ODDA_AUGMENT_H_
