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

#include "odda/report.h"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "fmt/format.h"
#include "odda/errors.h"
#include "odda/metrics.h"

namespace odda {

using nlohmann::json;

std::vector<double> RunReport::macro_f1_values() const {
  std::vector<double> v;
  v.reserve(per_seed.size());
  for (const auto& s : per_seed) v.push_back(s.macro_f1);
  return v;
}

RunReport MakeRunReport(std::string method, std::string cell,
                        std::vector<SeedResult> per_seed,
                        json hyperparameters) {
  RunReport r;
  r.method = std::move(method);
  r.cell = std::move(cell);
  r.per_seed = std::move(per_seed);
  r.hyperparameters = std::move(hyperparameters);
  std::vector<double> acc;
  for (const auto& s : r.per_seed) acc.push_back(s.accuracy);
  const auto f1 = r.macro_f1_values();
  r.mean_macro_f1 = Mean(f1);
  r.std_macro_f1 = PopulationStd(f1);
  r.mean_accuracy = Mean(acc);
  r.std_accuracy = PopulationStd(acc);
  return r;
}

json ToJson(const RunReport& report) {
  json seeds = json::array();
  for (const auto& s : report.per_seed) {
    seeds.push_back(
        {{"seed", s.seed}, {"macro_f1", s.macro_f1}, {"accuracy", s.accuracy}});
  }
  return {{"method", report.method},
          {"cell", report.cell},
          {"per_seed", seeds},
          {"mean_macro_f1", report.mean_macro_f1},
          {"std_macro_f1", report.std_macro_f1},
          {"mean_accuracy", report.mean_accuracy},
          {"std_accuracy", report.std_accuracy},
          {"hyperparameters", report.hyperparameters}};
}

RunReport RunReportFromJson(const json& j) {
  std::vector<SeedResult> seeds;
  for (const auto& s : j.at("per_seed")) {
    seeds.push_back({s.at("seed").get<std::uint64_t>(),
                     s.at("macro_f1").get<double>(),
                     s.at("accuracy").get<double>()});
  }
  return MakeRunReport(j.at("method").get<std::string>(),
                       j.value("cell", std::string()), std::move(seeds),
                       j.value("hyperparameters", json::object()));
}

std::string FormatReportTable(const std::vector<RunReport>& reports) {
  std::size_t method_w = 6;
  std::size_t cell_w = 4;
  for (const auto& r : reports) {
    method_w = std::max(method_w, r.method.size());
    cell_w = std::max(cell_w, r.cell.size());
  }
  std::string out = fmt::format("{:<{}}  {:<{}}  {:>6}  {:>10}  {:>10}  {:>10}\n",
                                "method", method_w, "cell", cell_w, "seeds",
                                "macro_f1", "std", "accuracy");
  for (const auto& r : reports) {
    out += fmt::format("{:<{}}  {:<{}}  {:>6}  {:>10.4f}  {:>10.4f}  {:>10.4f}\n",
                       r.method, method_w, r.cell, cell_w, r.per_seed.size(),
                       r.mean_macro_f1, r.std_macro_f1, r.mean_accuracy);
  }
  return out;
}

namespace {

std::string CsvField(std::string_view s) {
  if (s.find_first_of(",\"\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::vector<std::string> ParseCsvRow(std::string_view line) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        field += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        field += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
    } else {
      field += c;
    }
  }
  fields.push_back(std::move(field));
  return fields;
}

}  // namespace

std::string ToRunsCsv(const std::vector<RunReport>& reports) {
  std::string out = "method,cell,seed,macro_f1,accuracy\n";
  for (const auto& r : reports) {
    for (const auto& s : r.per_seed) {
      out += fmt::format("{},{},{},{:.17g},{:.17g}\n", CsvField(r.method),
                         CsvField(r.cell), s.seed, s.macro_f1, s.accuracy);
    }
  }
  return out;
}

std::vector<RunReport> RunReportsFromCsv(std::string_view csv) {
  std::istringstream in{std::string(csv)};
  std::string line;
  if (!std::getline(in, line) ||
      line.rfind("method,cell,seed,macro_f1,accuracy", 0) != 0) {
    throw DataError("runs CSV: unexpected header");
  }
  std::vector<std::pair<std::string, std::string>> keys;
  std::vector<std::vector<SeedResult>> seeds;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto f = ParseCsvRow(line);
    if (f.size() != 5) {
      throw DataError(fmt::format("runs CSV line {}: expected 5 fields", line_no));
    }
    SeedResult s;
    try {
      s = {std::stoull(f[2]), std::stod(f[3]), std::stod(f[4])};
    } catch (const std::exception&) {
      throw DataError(fmt::format("runs CSV line {}: bad number", line_no));
    }
    const std::pair key{f[0], f[1]};
    const auto it = std::find(keys.begin(), keys.end(), key);
    if (it == keys.end()) {
      keys.push_back(key);
      seeds.push_back({s});
    } else {
      seeds[it - keys.begin()].push_back(s);
    }
  }
  std::vector<RunReport> reports;
  for (std::size_t i = 0; i < keys.size(); ++i) {
    reports.push_back(
        MakeRunReport(keys[i].first, keys[i].second, std::move(seeds[i])));
  }
  return reports;
}

}  // namespace odda
