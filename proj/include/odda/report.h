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

#ifndef ODDA_REPORT_H_
#define ODDA_REPORT_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace odda {

struct SeedResult {
  std::uint64_t seed = 0;
  double macro_f1 = 0.0;
  double accuracy = 0.0;
  friend bool operator==(const SeedResult&, const SeedResult&) = default;
};

// Per-method outcome over several seeds. `cell` names the sweep or grid cell
// the run belongs to ("" for a single run).
struct RunReport {
  std::string method;
  std::string cell;
  std::vector<SeedResult> per_seed;
  double mean_macro_f1 = 0.0;
  double std_macro_f1 = 0.0;  // population
  double mean_accuracy = 0.0;
  double std_accuracy = 0.0;
  nlohmann::json hyperparameters = nlohmann::json::object();

  std::vector<double> macro_f1_values() const;
};

// Fills the aggregate fields from `per_seed`.
RunReport MakeRunReport(std::string method, std::string cell,
                        std::vector<SeedResult> per_seed,
                        nlohmann::json hyperparameters = nlohmann::json::object());

nlohmann::json ToJson(const RunReport& report);
RunReport RunReportFromJson(const nlohmann::json& j);

// Aligned-column rendering for terminals.
std::string FormatReportTable(const std::vector<RunReport>& reports);

// Long-format CSV: header "method,cell,seed,macro_f1,accuracy", one row per
// seed, values printed with round-trip precision.
std::string ToRunsCsv(const std::vector<RunReport>& reports);
// Parses ToRunsCsv output back into reports grouped by (method, cell) in
// first-appearance order. Hyperparameters are not carried by the CSV.
std::vector<RunReport> RunReportsFromCsv(std::string_view csv);

}  // namespace odda

#endif  // ODDA_REPORT_H_
