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

#ifndef ODDA_SYNTHETIC_H_
#define ODDA_SYNTHETIC_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "odda/dataset.h"

namespace odda {

// Token-level generator for desk-scale benchmarks. Class c owns the tokens
// "c<c>w<j>" (j < vocab); "n<j>" (j < noise_vocab) are shared noise tokens.
// Every token of an example is, independently, a uniform class token with
// probability signal_strength and a uniform noise token otherwise. Labels are
// balanced (example i has label i mod classes).
struct SyntheticSpec {
  int n = 500;  // training examples
  int n_test = 1000;
  int classes = 2;
  int vocab = 100;  // class tokens per class
  int noise_vocab = 200;
  int length = 12;  // tokens per example
  double signal_strength = 0.15;
  int synonyms = 3;  // lexicon entries per token
  std::uint64_t seed = 1;

  // Throws ConfigError for a degenerate spec.
  void Validate() const;
};

nlohmann::json ToJson(const SyntheticSpec& spec);

// Class tokens never occur in other classes, so an example is classified
// exactly when it holds at least one class token and only by guessing
// (1/classes) otherwise: 1 - (1 - s)^L * (1 - 1/C).
double SyntheticBayesAccuracy(const SyntheticSpec& spec);

struct SyntheticCorpus {
  Dataset train;
  Dataset test;
  // Synonyms stay within a class's vocabulary (or within the noise tokens), so
  // synonym edits never move class evidence across classes.
  Lexicon lexicon;
  std::vector<std::string> stopwords;
  std::vector<std::string> signal_tokens;  // all class tokens
};

SyntheticCorpus GenerateSynthetic(const SyntheticSpec& spec);

// Writes train.tsv, test.tsv, lexicon.tsv, stopwords.txt and
// signal_tokens.txt into `dir`.
void WriteSynthetic(const SyntheticCorpus& corpus,
                    const std::filesystem::path& dir);

}  // namespace odda

#endif  // ODDA_SYNTHETIC_H_
