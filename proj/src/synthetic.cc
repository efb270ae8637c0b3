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

#include "odda/synthetic.h"

#include <cmath>
#include <fstream>

#include "fmt/format.h"
#include "odda/errors.h"
#include "odda/rng.h"

namespace odda {

namespace {

constexpr int kStopwordCount = 5;

std::string ClassToken(int c, int j) { return fmt::format("c{}w{}", c, j); }
std::string NoiseToken(int j) { return fmt::format("n{}", j); }

Dataset Sample(const SyntheticSpec& spec, int n, std::string_view split) {
  Dataset out;
  for (int c = 0; c < spec.classes; ++c) {
    out.label_names.push_back(fmt::format("label_{:02d}", c));
  }
  for (int i = 0; i < n; ++i) {
    SeededRng rng(spec.seed, split, static_cast<std::uint64_t>(i));
    const int label = i % spec.classes;
    std::vector<std::string> tokens;
    for (int t = 0; t < spec.length; ++t) {
      if (rng.Uniform() < spec.signal_strength) {
        tokens.push_back(ClassToken(label, static_cast<int>(rng.UniformIndex(spec.vocab))));
      } else {
        tokens.push_back(NoiseToken(static_cast<int>(rng.UniformIndex(spec.noise_vocab))));
      }
    }
    out.examples.push_back({i, fmt::format("{}", fmt::join(tokens, " ")), label,
                            std::nullopt});
  }
  return out;
}

void WriteTsv(const Dataset& d, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError(fmt::format("cannot write {}", path.string()));
  for (const auto& e : d.examples) {
    out << e.text << '\t' << d.label_names[e.label] << '\n';
  }
}

void WriteLines(const std::vector<std::string>& lines,
                const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError(fmt::format("cannot write {}", path.string()));
  for (const auto& l : lines) out << l << '\n';
}

}  // namespace

void SyntheticSpec::Validate() const {
  if (classes < 2) throw ConfigError("synthetic: classes must be >= 2");
  if (n < classes) throw ConfigError("synthetic: n must be >= classes");
  if (n_test < 1) throw ConfigError("synthetic: n_test must be >= 1");
  if (vocab < 1 || noise_vocab < 1) {
    throw ConfigError("synthetic: vocabularies must be non-empty");
  }
  if (length < 1) throw ConfigError("synthetic: length must be >= 1");
  if (!(signal_strength >= 0.0 && signal_strength <= 1.0)) {
    throw ConfigError("synthetic: signal_strength must lie in [0, 1]");
  }
  if (synonyms < 0) throw ConfigError("synthetic: synonyms must be >= 0");
}

nlohmann::json ToJson(const SyntheticSpec& s) {
  return {{"n", s.n},
          {"n_test", s.n_test},
          {"classes", s.classes},
          {"vocab", s.vocab},
          {"noise_vocab", s.noise_vocab},
          {"length", s.length},
          {"signal_strength", s.signal_strength},
          {"synonyms", s.synonyms},
          {"seed", s.seed}};
}

double SyntheticBayesAccuracy(const SyntheticSpec& spec) {
  const double no_signal = std::pow(1.0 - spec.signal_strength, spec.length);
  return 1.0 - no_signal * (1.0 - 1.0 / spec.classes);
}

SyntheticCorpus GenerateSynthetic(const SyntheticSpec& spec) {
  spec.Validate();
  SyntheticCorpus out;
  out.train = Sample(spec, spec.n, "synthetic.train");
  out.test = Sample(spec, spec.n_test, "synthetic.test");

  const auto add_ring = [&](int size, auto name) {
    const int syn = std::min(spec.synonyms, size - 1);
    for (int j = 0; j < size && syn > 0; ++j) {
      auto& list = out.lexicon.synonyms[name(j)];
      for (int s = 1; s <= syn; ++s) list.push_back(name((j + s) % size));
    }
  };
  for (int c = 0; c < spec.classes; ++c) {
    add_ring(spec.vocab, [c](int j) { return ClassToken(c, j); });
    for (int j = 0; j < spec.vocab; ++j) out.signal_tokens.push_back(ClassToken(c, j));
  }
  add_ring(spec.noise_vocab, NoiseToken);
  for (int j = 0; j < std::min(kStopwordCount, spec.noise_vocab); ++j) {
    out.stopwords.push_back(NoiseToken(j));
  }
  return out;
}

void WriteSynthetic(const SyntheticCorpus& corpus,
                    const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  WriteTsv(corpus.train, dir / "train.tsv");
  WriteTsv(corpus.test, dir / "test.tsv");
  std::vector<std::string> lexicon;
  for (const auto& [head, syns] : corpus.lexicon.synonyms) {
    lexicon.push_back(fmt::format("{}\t{}", head, fmt::join(syns, ",")));
  }
  WriteLines(lexicon, dir / "lexicon.tsv");
  WriteLines(corpus.stopwords, dir / "stopwords.txt");
  WriteLines(corpus.signal_tokens, dir / "signal_tokens.txt");
}

}  // namespace odda
