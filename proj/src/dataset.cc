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

#include "odda/dataset.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

#include "fmt/format.h"
#include "json.hpp"
#include "odda/errors.h"
#include "odda/rng.h"
#include "odda/text.h"

namespace odda {
namespace {

using nlohmann::json;

struct RawRecord {
  std::string text;
  std::string label;
  std::optional<std::int64_t> id;
  std::optional<std::int64_t> origin_id;
  int line = 0;
};

std::string Trim(std::string_view s) {
  const auto is_space = [](unsigned char c) { return std::isspace(c) != 0; };
  std::size_t begin = 0;
  std::size_t end = s.size();
  while (begin < end && is_space(s[begin])) ++begin;
  while (end > begin && is_space(s[end - 1])) --end;
  return std::string(s.substr(begin, end - begin));
}

std::vector<std::string> ReadLines(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError(fmt::format("cannot open {}", path.string()));
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
  }
  return lines;
}

// Splits one CSV line honoring double-quoted fields with "" escapes.
std::vector<std::string> SplitCsvLine(std::string_view line, int line_no,
                                      const std::filesystem::path& path) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
    } else {
      field.push_back(c);
    }
  }
  if (quoted) {
    throw DataError(fmt::format("{}:{}: unterminated quoted field",
                                path.string(), line_no));
  }
  fields.push_back(std::move(field));
  return fields;
}

std::vector<RawRecord> ReadTsv(const std::filesystem::path& path) {
  std::vector<RawRecord> records;
  const auto lines = ReadLines(path);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const int line_no = static_cast<int>(i) + 1;
    const std::string& line = lines[i];
    if (Trim(line).empty()) continue;
    const auto tab = line.rfind('\t');
    if (tab == std::string::npos) {
      throw DataError(fmt::format("{}:{}: missing label column",
                                  path.string(), line_no));
    }
    records.push_back({line.substr(0, tab), Trim(line.substr(tab + 1)),
                       std::nullopt, std::nullopt, line_no});
  }
  return records;
}

std::vector<RawRecord> ReadCsv(const std::filesystem::path& path) {
  const auto lines = ReadLines(path);
  std::size_t first = 0;
  while (first < lines.size() && Trim(lines[first]).empty()) ++first;
  if (first == lines.size()) return {};
  const auto header = SplitCsvLine(lines[first], static_cast<int>(first) + 1,
                                   path);
  int text_col = -1;
  int label_col = -1;
  for (std::size_t c = 0; c < header.size(); ++c) {
    const std::string name = Trim(header[c]);
    if (name == "text") text_col = static_cast<int>(c);
    if (name == "label") label_col = static_cast<int>(c);
  }
  if (text_col < 0 || label_col < 0) {
    throw DataError(fmt::format("{}:{}: header must name text and label",
                                path.string(), first + 1));
  }
  std::vector<RawRecord> records;
  for (std::size_t i = first + 1; i < lines.size(); ++i) {
    const int line_no = static_cast<int>(i) + 1;
    if (Trim(lines[i]).empty()) continue;
    const auto fields = SplitCsvLine(lines[i], line_no, path);
    const auto needed = static_cast<std::size_t>(std::max(text_col, label_col));
    if (fields.size() <= needed) {
      throw DataError(fmt::format("{}:{}: expected {} columns, found {}",
                                  path.string(), line_no, header.size(),
                                  fields.size()));
    }
    records.push_back({fields[text_col], Trim(fields[label_col]), std::nullopt,
                       std::nullopt, line_no});
  }
  return records;
}

std::vector<RawRecord> ReadJsonl(const std::filesystem::path& path) {
  std::vector<RawRecord> records;
  const auto lines = ReadLines(path);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const int line_no = static_cast<int>(i) + 1;
    if (Trim(lines[i]).empty()) continue;
    json obj;
    try {
      obj = json::parse(lines[i]);
    } catch (const json::exception& e) {
      throw DataError(fmt::format("{}:{}: invalid JSON ({})", path.string(),
                                  line_no, e.what()));
    }
    if (!obj.is_object() || !obj.contains("text") || !obj["text"].is_string()) {
      throw DataError(fmt::format("{}:{}: missing string field \"text\"",
                                  path.string(), line_no));
    }
    if (!obj.contains("label") || obj["label"].is_null()) {
      throw DataError(
          fmt::format("{}:{}: missing field \"label\"", path.string(), line_no));
    }
    RawRecord record;
    record.text = obj["text"].get<std::string>();
    const json& label = obj["label"];
    record.label = label.is_string() ? label.get<std::string>() : label.dump();
    if (obj.contains("id") && obj["id"].is_number_integer()) {
      record.id = obj["id"].get<std::int64_t>();
    }
    if (obj.contains("origin_id") && obj["origin_id"].is_number_integer()) {
      record.origin_id = obj["origin_id"].get<std::int64_t>();
    }
    record.line = line_no;
    records.push_back(std::move(record));
  }
  return records;
}

std::vector<RawRecord> ReadRecords(const std::filesystem::path& path,
                                   DataFormat format) {
  std::vector<RawRecord> records;
  switch (format) {
    case DataFormat::kTsv:
      records = ReadTsv(path);
      break;
    case DataFormat::kCsv:
      records = ReadCsv(path);
      break;
    case DataFormat::kJsonl:
      records = ReadJsonl(path);
      break;
  }
  if (records.empty()) {
    throw DataError(fmt::format("{}: no records", path.string()));
  }
  for (const auto& r : records) {
    if (Trim(r.text).empty()) {
      throw DataError(
          fmt::format("{}:{}: empty text", path.string(), r.line));
    }
    if (r.label.empty()) {
      throw DataError(
          fmt::format("{}:{}: empty label", path.string(), r.line));
    }
  }
  return records;
}

Dataset BuildDataset(const std::vector<RawRecord>& records,
                     std::vector<std::string> label_names,
                     const std::filesystem::path& path) {
  std::map<std::string, int, std::less<>> index;
  for (std::size_t i = 0; i < label_names.size(); ++i) {
    index.emplace(label_names[i], static_cast<int>(i));
  }
  Dataset d;
  d.label_names = std::move(label_names);
  d.examples.reserve(records.size());
  std::set<std::int64_t> seen_ids;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    const auto it = index.find(r.label);
    if (it == index.end()) {
      throw DataError(fmt::format("{}:{}: unknown label \"{}\"", path.string(),
                                  r.line, r.label));
    }
    Example e;
    e.id = r.id.value_or(static_cast<std::int64_t>(i));
    if (!seen_ids.insert(e.id).second) {
      throw DataError(
          fmt::format("{}:{}: duplicate id {}", path.string(), r.line, e.id));
    }
    e.text = r.text;
    e.label = it->second;
    e.origin_id = r.origin_id;
    d.examples.push_back(std::move(e));
  }
  return d;
}

}  // namespace

std::vector<int> Dataset::labels() const {
  std::vector<int> out;
  out.reserve(examples.size());
  for (const auto& e : examples) out.push_back(e.label);
  return out;
}

DataFormat ParseDataFormat(std::string_view name) {
  if (name == "tsv") return DataFormat::kTsv;
  if (name == "csv") return DataFormat::kCsv;
  if (name == "jsonl") return DataFormat::kJsonl;
  throw ConfigError(fmt::format("unknown data format \"{}\"", name));
}

DataFormat FormatFromPath(const std::filesystem::path& path) {
  const std::string ext = path.extension().string();
  if (ext == ".tsv" || ext == ".txt") return DataFormat::kTsv;
  if (ext == ".csv") return DataFormat::kCsv;
  if (ext == ".jsonl" || ext == ".json") return DataFormat::kJsonl;
  throw ConfigError(
      fmt::format("cannot infer data format from \"{}\"", path.string()));
}

Dataset LoadDataset(const std::filesystem::path& path, DataFormat format) {
  auto records = ReadRecords(path, format);
  // Ids come from file order for original datasets.
  for (auto& r : records) r.id.reset();
  std::set<std::string> names;
  for (const auto& r : records) names.insert(r.label);
  if (names.size() < 2) {
    throw DataError(
        fmt::format("{}: need at least two distinct labels", path.string()));
  }
  return BuildDataset(records, {names.begin(), names.end()}, path);
}

Dataset LoadDatasetWithLabels(const std::filesystem::path& path,
                              DataFormat format,
                              const std::vector<std::string>& label_names) {
  return BuildDataset(ReadRecords(path, format), label_names, path);
}

std::string ToJsonl(const Dataset& dataset) {
  std::string out;
  for (const auto& e : dataset.examples) {
    json obj;
    obj["id"] = e.id;
    obj["text"] = e.text;
    obj["label"] = dataset.label_names.at(e.label);
    if (e.origin_id) obj["origin_id"] = *e.origin_id;
    out += obj.dump();
    out += '\n';
  }
  return out;
}

void SaveJsonl(const Dataset& dataset, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError(fmt::format("cannot write {}", path.string()));
  out << ToJsonl(dataset);
}

namespace {

std::vector<std::vector<std::size_t>> IndicesByClass(const Dataset& d) {
  std::vector<std::vector<std::size_t>> by_class(d.num_classes());
  for (std::size_t i = 0; i < d.examples.size(); ++i) {
    const int label = d.examples[i].label;
    if (label < 0 || label >= d.num_classes()) {
      throw std::invalid_argument("example label outside the label set");
    }
    by_class[label].push_back(i);
  }
  return by_class;
}

Dataset PickSorted(const Dataset& d, std::vector<std::size_t> indices) {
  std::sort(indices.begin(), indices.end(), [&](std::size_t a, std::size_t b) {
    return d.examples[a].id < d.examples[b].id;
  });
  Dataset out;
  out.label_names = d.label_names;
  out.examples.reserve(indices.size());
  for (std::size_t i : indices) out.examples.push_back(d.examples[i]);
  return out;
}

}  // namespace

Dataset Subsample(const Dataset& dataset, double fraction, std::uint64_t seed) {
  if (!(fraction > 0.0 && fraction <= 1.0)) {
    throw std::invalid_argument("subsample fraction must lie in (0, 1]");
  }
  const std::size_t n = dataset.size();
  const std::size_t num_classes = dataset.label_names.size();
  const auto total = static_cast<std::size_t>(
      std::ceil(fraction * static_cast<double>(n) - 1e-9));
  if (total < num_classes) {
    throw std::invalid_argument(
        fmt::format("fraction {} keeps {} examples, fewer than {} classes",
                    fraction, total, num_classes));
  }
  auto by_class = IndicesByClass(dataset);
  for (std::size_t c = 0; c < num_classes; ++c) {
    if (by_class[c].empty()) {
      throw std::invalid_argument(
          fmt::format("class \"{}\" has no examples", dataset.label_names[c]));
    }
  }

  // Largest-remainder allocation of `total` over classes, one per class first.
  std::vector<std::size_t> quota(num_classes);
  std::vector<std::pair<double, std::size_t>> remainders;
  std::size_t assigned = 0;
  const double scale = static_cast<double>(total) / static_cast<double>(n);
  for (std::size_t c = 0; c < num_classes; ++c) {
    const double exact = scale * static_cast<double>(by_class[c].size());
    quota[c] = std::max<std::size_t>(1, static_cast<std::size_t>(exact));
    quota[c] = std::min(quota[c], by_class[c].size());
    assigned += quota[c];
    remainders.emplace_back(exact - std::floor(exact), c);
  }
  std::stable_sort(remainders.begin(), remainders.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  for (std::size_t i = 0; assigned < total; i = (i + 1) % num_classes) {
    const std::size_t c = remainders[i].second;
    if (quota[c] < by_class[c].size()) {
      ++quota[c];
      ++assigned;
    }
  }
  while (assigned > total) {
    // Minimum-one guarantees can overshoot; trim the largest quotas.
    const auto it = std::max_element(quota.begin(), quota.end());
    --*it;
    --assigned;
  }

  std::vector<std::size_t> picked;
  picked.reserve(total);
  for (std::size_t c = 0; c < num_classes; ++c) {
    auto& idx = by_class[c];
    SeededRng rng(seed, "subsample", c);
    rng.Shuffle(std::span<std::size_t>(idx));
    picked.insert(picked.end(), idx.begin(), idx.begin() + quota[c]);
  }
  return PickSorted(dataset, std::move(picked));
}

std::pair<Dataset, Dataset> StratifiedSplit(const Dataset& dataset,
                                            double held_out_fraction,
                                            std::uint64_t seed) {
  if (!(held_out_fraction >= 0.0 && held_out_fraction < 1.0)) {
    throw std::invalid_argument("held-out fraction must lie in [0, 1)");
  }
  auto by_class = IndicesByClass(dataset);
  std::vector<std::size_t> kept;
  std::vector<std::size_t> held;
  for (std::size_t c = 0; c < by_class.size(); ++c) {
    auto& idx = by_class[c];
    SeededRng rng(seed, "split", c);
    rng.Shuffle(std::span<std::size_t>(idx));
    std::size_t n_held = 0;
    if (held_out_fraction > 0.0 && idx.size() >= 2) {
      n_held = static_cast<std::size_t>(
          std::llround(held_out_fraction * static_cast<double>(idx.size())));
      n_held = std::clamp<std::size_t>(n_held, 1, idx.size() - 1);
    }
    held.insert(held.end(), idx.begin(), idx.begin() + n_held);
    kept.insert(kept.end(), idx.begin() + n_held, idx.end());
  }
  return {PickSorted(dataset, std::move(kept)),
          PickSorted(dataset, std::move(held))};
}

const std::vector<std::string>* Lexicon::Find(std::string_view word) const {
  const auto it = synonyms.find(word);
  return it == synonyms.end() ? nullptr : &it->second;
}

Lexicon LoadLexicon(const std::filesystem::path& path) {
  Lexicon lexicon;
  const auto lines = ReadLines(path);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (Trim(lines[i]).empty()) continue;
    const auto tab = lines[i].find('\t');
    if (tab == std::string::npos) {
      throw DataError(fmt::format("{}:{}: expected headword<TAB>synonyms",
                                  path.string(), i + 1));
    }
    const std::string head = Lowercase(Trim(lines[i].substr(0, tab)));
    std::vector<std::string> syns;
    std::stringstream ss(lines[i].substr(tab + 1));
    std::string syn;
    while (std::getline(ss, syn, ',')) {
      syn = Lowercase(Trim(syn));
      if (!syn.empty() && syn != head) syns.push_back(syn);
    }
    if (head.empty() || syns.empty()) continue;
    auto& slot = lexicon.synonyms[head];
    slot.insert(slot.end(), syns.begin(), syns.end());
  }
  return lexicon;
}

std::vector<std::string> LoadWordList(const std::filesystem::path& path) {
  std::vector<std::string> words;
  for (const auto& line : ReadLines(path)) {
    std::string w = Lowercase(Trim(line));
    if (!w.empty()) words.push_back(std::move(w));
  }
  return words;
}

}  // namespace odda
