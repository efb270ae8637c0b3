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
#include <unordered_set>

#include "fmt/format.h"
#include "odda/errors.h"
#include "odda/text.h"

namespace odda {
namespace {

void Count(int* applied) {
  if (applied) ++*applied;
}

bool Eligible(const std::string& token, const Lexicon& lexicon,
              const TokenSet& stopwords) {
  return !stopwords.contains(token) && lexicon.Find(token) != nullptr;
}

}  // namespace

void EdaConfig::Validate() const {
  for (double p : {p_sr, p_ri, p_rs, p_rd}) {
    if (!(p >= 0.0 && p <= 1.0)) {
      throw ConfigError("EDA probabilities must lie in [0, 1]");
    }
  }
  if (k < 1) throw ConfigError("augmentation factor k must be >= 1");
}

std::vector<std::string> SynonymReplace(std::vector<std::string> tokens,
                                        double p, const Lexicon& lexicon,
                                        const TokenSet& stopwords,
                                        SeededRng& rng, int* applied) {
  if (p <= 0.0) return tokens;
  for (auto& token : tokens) {
    if (stopwords.contains(token)) continue;
    const auto* synonyms = lexicon.Find(token);
    if (synonyms == nullptr || synonyms->empty()) continue;
    if (rng.Bernoulli(p)) {
      token = (*synonyms)[rng.UniformIndex(synonyms->size())];
      Count(applied);
    }
  }
  return tokens;
}

std::vector<std::string> RandomInsert(std::vector<std::string> tokens, double p,
                                      const Lexicon& lexicon,
                                      const TokenSet& stopwords, SeededRng& rng,
                                      int* applied) {
  if (p <= 0.0 || tokens.empty()) return tokens;
  std::vector<std::string> eligible;
  for (const auto& t : tokens) {
    if (Eligible(t, lexicon, stopwords)) eligible.push_back(t);
  }
  if (eligible.empty()) return tokens;
  const std::size_t trials = tokens.size();
  for (std::size_t i = 0; i < trials; ++i) {
    if (!rng.Bernoulli(p)) continue;
    const auto& source = eligible[rng.UniformIndex(eligible.size())];
    const auto& synonyms = *lexicon.Find(source);
    std::string inserted = synonyms[rng.UniformIndex(synonyms.size())];
    const std::size_t pos = rng.UniformIndex(tokens.size() + 1);
    tokens.insert(tokens.begin() + static_cast<std::ptrdiff_t>(pos),
                  std::move(inserted));
    Count(applied);
  }
  return tokens;
}

std::vector<std::string> RandomSwap(std::vector<std::string> tokens, double p,
                                    SeededRng& rng, int* applied) {
  if (p <= 0.0 || tokens.size() < 2) return tokens;
  const std::size_t n = tokens.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (!rng.Bernoulli(p)) continue;
    const std::size_t a = rng.UniformIndex(n);
    const std::size_t b = rng.UniformIndex(n);
    std::swap(tokens[a], tokens[b]);
    Count(applied);
  }
  return tokens;
}

std::vector<std::string> RandomDelete(std::vector<std::string> tokens, double p,
                                      SeededRng& rng, int* applied) {
  if (p <= 0.0 || tokens.size() < 2) return tokens;
  std::vector<std::string> kept;
  kept.reserve(tokens.size());
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const bool drop = rng.Bernoulli(p);
    const bool last_chance = kept.empty() && i + 1 == tokens.size();
    if (drop && !last_chance) {
      Count(applied);
    } else {
      kept.push_back(std::move(tokens[i]));
    }
  }
  return kept;
}

std::string EdaAugmentText(const std::string& text, const EdaConfig& config,
                           SeededRng& rng) {
  auto tokens = Tokenize(text);
  if (tokens.empty()) return text;
  int edits = 0;
  tokens = SynonymReplace(std::move(tokens), config.p_sr, config.lexicon,
                          config.stopwords, rng, &edits);
  tokens = RandomInsert(std::move(tokens), config.p_ri, config.lexicon,
                        config.stopwords, rng, &edits);
  tokens = RandomSwap(std::move(tokens), config.p_rs, rng, &edits);
  tokens = RandomDelete(std::move(tokens), config.p_rd, rng, &edits);
  // An unedited variant keeps the original surface form.
  return edits == 0 ? text : JoinTokens(tokens);
}

Dataset EdaAugment(const Dataset& dataset, const EdaConfig& config,
                   std::uint64_t seed) {
  config.Validate();
  Dataset out;
  out.label_names = dataset.label_names;
  out.examples.reserve(dataset.size() * config.k);
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    const Example& source = dataset.examples[i];
    for (int j = 0; j < config.k; ++j) {
      SeededRng rng(seed, "eda", static_cast<std::uint64_t>(source.id),
                    static_cast<std::uint64_t>(j));
      Example e;
      e.id = static_cast<std::int64_t>(i) * config.k + j;
      e.text = EdaAugmentText(source.text, config, rng);
      e.label = source.label;
      e.origin_id = source.id;
      out.examples.push_back(std::move(e));
    }
  }
  return out;
}

Dataset FlipLabels(const Dataset& augmented, const NoiseConfig& config) {
  if (augmented.num_classes() < 2) {
    throw std::invalid_argument("label flipping needs at least two classes");
  }
  if (!(config.p_n >= 0.0 && config.p_n <= 1.0)) {
    throw ConfigError("noise.p_n must lie in [0, 1]");
  }
  Dataset out = augmented;
  if (config.p_n == 0.0) return out;
  const int num_classes = out.num_classes();
  for (auto& e : out.examples) {
    SeededRng rng(config.seed, "flip", static_cast<std::uint64_t>(e.id));
    if (!rng.Bernoulli(config.p_n)) continue;
    const int shift = 1 + static_cast<int>(rng.UniformIndex(num_classes - 1));
    e.label = (e.label + shift) % num_classes;
  }
  return out;
}

Dataset DropTokens(const Dataset& augmented, const TokenSet& targets,
                   double rate, std::uint64_t seed) {
  if (!(rate >= 0.0 && rate <= 1.0)) {
    throw ConfigError("token drop rate must lie in [0, 1]");
  }
  Dataset out = augmented;
  if (rate == 0.0 || targets.empty()) return out;
  for (auto& e : out.examples) {
    SeededRng rng(seed, "drop_tokens", static_cast<std::uint64_t>(e.id));
    auto tokens = Tokenize(e.text);
    std::vector<std::string> kept;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      if (targets.contains(tokens[i]) && rng.Bernoulli(rate) &&
          !(kept.empty() && i + 1 == tokens.size())) {
        continue;
      }
      kept.push_back(std::move(tokens[i]));
    }
    if (!kept.empty()) e.text = JoinTokens(kept);
  }
  return out;
}

Augmenter MakeEdaAugmenter(EdaConfig config, std::uint64_t seed) {
  config.Validate();
  return [config = std::move(config), seed](const Dataset& originals) {
    return EdaAugment(originals, config, seed);
  };
}

Augmenter MakeIdentityAugmenter(int k) {
  if (k < 1) throw ConfigError("augmentation factor k must be >= 1");
  return [k](const Dataset& originals) {
    EdaConfig config;
    config.p_sr = config.p_ri = config.p_rs = config.p_rd = 0.0;
    config.k = k;
    return EdaAugment(originals, config, 0);
  };
}

Augmenter MakeExternalAugmenter(std::filesystem::path path) {
  return [path = std::move(path)](const Dataset& originals) {
    Dataset loaded =
        LoadDatasetWithLabels(path, FormatFromPath(path), originals.label_names);
    std::unordered_set<std::int64_t> present;
    for (const auto& e : originals.examples) present.insert(e.id);
    Dataset out;
    out.label_names = originals.label_names;
    for (auto& e : loaded.examples) {
      if (e.origin_id && !present.contains(*e.origin_id)) continue;
      out.examples.push_back(std::move(e));
    }
    return out;
  };
}

}  // namespace odda
