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

#ifndef ODDA_DATASET_H_
#define ODDA_DATASET_H_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace odda {

// A labeled text instance. Augmented instances carry the id of the original
// example they were derived from; augmenters with no source mapping leave
// `origin_id` empty.
struct Example {
  std::int64_t id = 0;
  std::string text;
  int label = 0;
  std::optional<std::int64_t> origin_id;

  bool is_augmented() const { return origin_id.has_value(); }
  friend bool operator==(const Example&, const Example&) = default;
};

struct Dataset {
  std::vector<std::string> label_names;
  std::vector<Example> examples;

  int num_classes() const { return static_cast<int>(label_names.size()); }
  std::size_t size() const { return examples.size(); }
  bool empty() const { return examples.empty(); }
  std::vector<int> labels() const;

  friend bool operator==(const Dataset&, const Dataset&) = default;
};

enum class DataFormat { kTsv, kCsv, kJsonl };

// Accepts "tsv", "csv" or "jsonl". Throws ConfigError otherwise.
DataFormat ParseDataFormat(std::string_view name);
// Infers the format from the file extension.
DataFormat FormatFromPath(const std::filesystem::path& path);

// Reads a labeled dataset. Label indices follow the lexicographic order of
// label names; ids are assigned 0..n-1 in file order. Throws DataError on an
// unreadable or empty file and on malformed records (naming the line).
Dataset LoadDataset(const std::filesystem::path& path, DataFormat format);

// As above, but maps labels onto a fixed label set. A label outside the set is
// a DataError. JSONL records may carry "id" and "origin_id" fields, which are
// preserved; this is how pre-generated augmentation files are ingested.
Dataset LoadDatasetWithLabels(const std::filesystem::path& path,
                              DataFormat format,
                              const std::vector<std::string>& label_names);

// One JSON object per line: {"id","text","label"[,"origin_id"]} with the label
// written by name.
void SaveJsonl(const Dataset& dataset, const std::filesystem::path& path);
std::string ToJsonl(const Dataset& dataset);

// Stratified sample of ceil(fraction * n) examples. Every class keeps at least
// one example and per-class counts follow the class proportions up to integer
// rounding. The result is ordered by id. Throws std::invalid_argument when the
// sample cannot cover every class.
Dataset Subsample(const Dataset& dataset, double fraction, std::uint64_t seed);

// Stratified split into (kept, held_out). Each class with at least two
// examples contributes round(fraction * n_c) (minimum one) held-out examples
// and keeps at least one.
std::pair<Dataset, Dataset> StratifiedSplit(const Dataset& dataset,
                                            double held_out_fraction,
                                            std::uint64_t seed);

// Reads "headword<TAB>syn1,syn2,..." lines. Headwords and synonyms are
// lowercased.
struct Lexicon {
  std::map<std::string, std::vector<std::string>, std::less<>> synonyms;

  // Null when `word` has no entry.
  const std::vector<std::string>* Find(std::string_view word) const;
};
Lexicon LoadLexicon(const std::filesystem::path& path);

// One token per line.
std::vector<std::string> LoadWordList(const std::filesystem::path& path);

}  // namespace odda

#endif  // ODDA_DATASET_H_
