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

#ifndef ODDA_COMMANDS_H_
#define ODDA_COMMANDS_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "odda/config.h"
#include "odda/experiment.h"
#include "odda/report.h"

namespace odda {

// A fully resolved command invocation. Serialized as the run manifest, from
// which the command can be replayed.
struct CommandRequest {
  std::string command;  // augment | train | sweep-noise | ablate | eval | gen-synthetic
  ExperimentConfig config;
  std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5};
  int threads = 1;
  // Command-specific arguments: p_n / methods lists for sweep-noise, the
  // tau / alpha / m grid for ablate, checkpoint and data paths for eval, the
  // generator spec for gen-synthetic.
  nlohmann::json args = nlohmann::json::object();
};

nlohmann::json ToManifest(const CommandRequest& request);
CommandRequest RequestFromManifest(const nlohmann::json& manifest);
CommandRequest LoadManifest(const std::filesystem::path& path);

const std::vector<std::string>& CommandNames();

// Runs the command, writing manifest.json and its outputs under `out_dir`.
// Returns a human-readable summary.
std::string RunCommand(const CommandRequest& request,
                       const std::filesystem::path& out_dir);

// One report per (method, p_n) cell, ordered by method then p_n. The cell of
// each report is "p_n=<value>".
std::vector<RunReport> SweepNoise(const ExperimentInputs& inputs,
                                  const ExperimentConfig& config,
                                  const std::vector<std::string>& methods,
                                  const std::vector<double>& p_n_values,
                                  const std::vector<std::uint64_t>& seeds,
                                  const ExperimentOptions& options = {});

// Methods x p_n matrix of mean macro-F1.
std::string NoiseTableCsv(const std::vector<RunReport>& reports,
                          const std::vector<std::string>& methods,
                          const std::vector<double>& p_n_values);

struct AblationGrid {
  std::vector<double> tau;
  std::vector<double> alpha;
  std::vector<int> m;
};

struct AblationResult {
  std::vector<RunReport> reports;  // cell "tau=..,alpha=..,m=.."
  std::vector<double> runtime_seconds;
  std::size_t best = 0;  // highest mean macro-F1, first on ties
};

// Full factorial over the grid (tau outermost, m innermost). Throws
// ConfigError when any axis is empty.
AblationResult Ablate(const ExperimentInputs& inputs,
                      const ExperimentConfig& config, const AblationGrid& grid,
                      const std::vector<std::uint64_t>& seeds,
                      const ExperimentOptions& options = {});

// Exit status for an exception escaping a command: 2 config, 3 data,
// 4 numeric, 1 anything else.
int ExitCodeFor(const std::exception& error);

}  // namespace odda

#endif  // ODDA_COMMANDS_H_
