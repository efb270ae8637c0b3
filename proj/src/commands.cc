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

#include "odda/commands.h"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <mutex>
#include <stdexcept>

#include "fmt/format.h"
#include "odda/errors.h"
#include "odda/rng.h"
#include "odda/synthetic.h"
#include "spdlog/spdlog.h"

namespace odda {

using nlohmann::json;

namespace {

void WriteFile(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError(fmt::format("cannot write {}", path.string()));
  out << content;
}

void WriteJson(const std::filesystem::path& path, const json& j) {
  WriteFile(path, j.dump(2) + "\n");
}

std::string PnCell(double p_n) { return fmt::format("p_n={}", p_n); }

template <typename T>
std::vector<T> ListArg(const json& args, const char* key, std::vector<T> fallback) {
  if (!args.contains(key)) return fallback;
  try {
    return args.at(key).get<std::vector<T>>();
  } catch (const json::exception&) {
    throw ConfigError(fmt::format("argument '{}' must be a list", key));
  }
}

std::string StringArg(const json& args, const char* key) {
  if (!args.contains(key) || !args.at(key).is_string()) {
    throw ConfigError(fmt::format("argument '{}' is required", key));
  }
  return args.at(key).get<std::string>();
}

// Collects training-log records from concurrent workers and writes them
// ordered by (cell, seed); records of one seed arrive in order.
class LogCollector {
 public:
  explicit LogCollector(const std::vector<std::uint64_t>& seeds) : seeds_(seeds) {}

  TrainLogSink SinkFor(std::string cell) {
    const std::size_t cell_index = cells_++;
    return [this, cell_index, cell = std::move(cell)](const TrainLogRecord& r) {
      json j = ToJson(r);
      if (!cell.empty()) j["cell"] = cell;
      const auto pos = static_cast<std::size_t>(
          std::find(seeds_.begin(), seeds_.end(), r.seed) - seeds_.begin());
      std::lock_guard lock(mu_);
      entries_.push_back({cell_index, pos, std::move(j)});
    };
  }

  void Write(const std::filesystem::path& path) {
    std::stable_sort(entries_.begin(), entries_.end(),
                     [](const Entry& a, const Entry& b) {
                       return std::tie(a.cell, a.seed) < std::tie(b.cell, b.seed);
                     });
    std::string out;
    for (const auto& e : entries_) out += e.record.dump() + "\n";
    WriteFile(path, out);
  }

 private:
  struct Entry {
    std::size_t cell;
    std::size_t seed;
    json record;
  };
  std::vector<std::uint64_t> seeds_;
  std::size_t cells_ = 0;
  std::mutex mu_;
  std::vector<Entry> entries_;
};

ExperimentOptions OptionsFor(const CommandRequest& request, LogCollector& log,
                             const std::filesystem::path& out_dir,
                             std::string cell, std::string prefix) {
  ExperimentOptions options;
  options.threads = request.threads;
  options.sink = log.SinkFor(std::move(cell));
  options.checkpoint_dir = out_dir / "checkpoints";
  options.checkpoint_prefix = std::move(prefix);
  return options;
}

json ReportsJson(const std::string& command, const std::vector<RunReport>& reports) {
  json j = {{"command", command}, {"reports", json::array()}};
  for (const auto& r : reports) j["reports"].push_back(ToJson(r));
  return j;
}

std::string CmdAugment(const CommandRequest& req, const std::filesystem::path& out) {
  const ExperimentConfig& config = req.config;
  const ExperimentInputs inputs = LoadExperimentInputs(config);
  Dataset aug = MakeAugmenter(config, inputs,
                              DeriveSeed(config.seed, "augment"))(inputs.train);
  if (config.augment.corrupt_rate > 0.0) {
    aug = DropTokens(aug, inputs.corrupt_tokens, config.augment.corrupt_rate,
                     DeriveSeed(config.seed, "corrupt"));
  }
  if (config.noise.p_n > 0.0) {
    aug = FlipLabels(aug, {config.noise.p_n, DeriveSeed(config.noise_seed(), "noise")});
  }
  SaveJsonl(aug, out / "augmented.jsonl");
  return fmt::format("wrote {} augmented examples to {}\n", aug.size(),
                     (out / "augmented.jsonl").string());
}

std::string CmdTrain(const CommandRequest& req, const std::filesystem::path& out) {
  const ExperimentInputs inputs = LoadExperimentInputs(req.config);
  LogCollector log(req.seeds);
  const RunReport report = RunExperiment(
      inputs, req.config, req.seeds,
      OptionsFor(req, log, out, "", std::string(MethodName(req.config.method)) + "_"));
  WriteJson(out / "report.json", ReportsJson(req.command, {report}));
  WriteFile(out / "runs.csv", ToRunsCsv({report}));
  WriteFile(out / "table.csv", NoiseTableCsv({report}, {report.method}, {req.config.noise.p_n}));
  log.Write(out / "train_log.jsonl");
  return FormatReportTable({report});
}

std::string CmdSweepNoise(const CommandRequest& req, const std::filesystem::path& out) {
  const auto methods =
      ListArg<std::string>(req.args, "methods", {std::string(MethodName(req.config.method))});
  const auto p_n = ListArg<double>(req.args, "p_n", {0.0, 0.1, 0.3, 0.5});
  const ExperimentInputs inputs = LoadExperimentInputs(req.config);
  LogCollector log(req.seeds);
  std::vector<RunReport> reports;
  for (const auto& name : methods) {
    for (double p : p_n) {
      const std::string cell = PnCell(p);
      auto cell_report = SweepNoise(
          inputs, req.config, {name}, {p}, req.seeds,
          OptionsFor(req, log, out, cell, fmt::format("{}_{}_", name, cell)));
      reports.push_back(std::move(cell_report.front()));
    }
  }
  WriteJson(out / "report.json", ReportsJson(req.command, reports));
  WriteFile(out / "runs.csv", ToRunsCsv(reports));
  WriteFile(out / "table.csv", NoiseTableCsv(reports, methods, p_n));
  log.Write(out / "train_log.jsonl");
  return NoiseTableCsv(reports, methods, p_n);
}

std::string CmdAblate(const CommandRequest& req, const std::filesystem::path& out) {
  AblationGrid grid;
  grid.tau = ListArg<double>(req.args, "tau", {req.config.od.tau});
  grid.alpha = ListArg<double>(req.args, "alpha", {req.config.sr.alpha});
  grid.m = ListArg<int>(req.args, "m", {req.config.sr.m});
  const ExperimentInputs inputs = LoadExperimentInputs(req.config);
  LogCollector log(req.seeds);
  ExperimentOptions options = OptionsFor(req, log, out, "", "");
  options.checkpoint_dir.clear();
  options.sink = {};
  const AblationResult result = Ablate(inputs, req.config, grid, req.seeds, options);

  json report = ReportsJson(req.command, result.reports);
  report["best_cell"] = result.reports[result.best].cell;
  WriteJson(out / "report.json", report);
  WriteFile(out / "runs.csv", ToRunsCsv(result.reports));

  std::string table = "tau,alpha,m,mean_macro_f1,std_macro_f1,mean_accuracy,best\n";
  json timing = {{"runtime_seconds", json::object()}};
  std::string summary = "cell                         mean_f1   std_f1    seconds\n";
  std::size_t i = 0;
  for (double tau : grid.tau) {
    for (double alpha : grid.alpha) {
      for (int m : grid.m) {
        const RunReport& r = result.reports[i];
        const bool best = i == result.best;
        table += fmt::format("{},{},{},{},{},{},{}\n", tau, alpha, m, r.mean_macro_f1,
                             r.std_macro_f1, r.mean_accuracy, best ? 1 : 0);
        timing["runtime_seconds"][r.cell] = result.runtime_seconds[i];
        summary += fmt::format("{:<28} {:.4f}    {:.4f}    {:.2f}{}\n", r.cell,
                               r.mean_macro_f1, r.std_macro_f1,
                               result.runtime_seconds[i], best ? "  *best" : "");
        ++i;
      }
    }
  }
  WriteFile(out / "table.csv", table);
  // Wall-clock times are kept out of report.json so reports stay replayable.
  WriteJson(out / "timing.json", timing);
  return summary;
}

std::string CmdEval(const CommandRequest& req, const std::filesystem::path& out) {
  const std::string checkpoint = StringArg(req.args, "checkpoint");
  const std::string data = StringArg(req.args, "data");
  std::vector<std::string> labels;
  const Classifier model = Classifier::Load(checkpoint, &labels);
  const DataFormat format = req.config.data.format.empty()
                                ? FormatFromPath(data)
                                : ParseDataFormat(req.config.data.format);
  const Dataset dataset = LoadDatasetWithLabels(data, format, labels);
  const EvalMetrics m = Evaluate(model, dataset);
  const json report = {{"command", req.command},
                       {"examples", dataset.size()},
                       {"macro_f1", m.macro_f1},
                       {"accuracy", m.accuracy},
                       {"per_class_f1", m.per_class_f1},
                       {"label_names", labels}};
  WriteJson(out / "report.json", report);
  return fmt::format("macro_f1 {:.4f}  accuracy {:.4f}  ({} examples)\n", m.macro_f1,
                     m.accuracy, dataset.size());
}

SyntheticSpec SpecFromArgs(const json& args) {
  SyntheticSpec spec;
  const auto read = [&](const char* key, auto& field) {
    if (!args.contains(key)) return;
    try {
      field = args.at(key).get<std::decay_t<decltype(field)>>();
    } catch (const json::exception&) {
      throw ConfigError(fmt::format("argument '{}' has the wrong type", key));
    }
  };
  read("n", spec.n);
  read("n_test", spec.n_test);
  read("classes", spec.classes);
  read("vocab", spec.vocab);
  read("noise_vocab", spec.noise_vocab);
  read("length", spec.length);
  read("signal_strength", spec.signal_strength);
  read("synonyms", spec.synonyms);
  read("seed", spec.seed);
  return spec;
}

std::string CmdGenSynthetic(const CommandRequest& req, const std::filesystem::path& out) {
  const SyntheticSpec spec = SpecFromArgs(req.args);
  WriteSynthetic(GenerateSynthetic(spec), out);
  return fmt::format("wrote synthetic corpus to {} (Bayes accuracy {:.6f})\n",
                     out.string(), SyntheticBayesAccuracy(spec));
}

}  // namespace

json ToManifest(const CommandRequest& request) {
  return {{"command", request.command},
          {"config", ToJson(request.config)},
          {"seeds", request.seeds},
          {"threads", request.threads},
          {"args", request.args}};
}

CommandRequest RequestFromManifest(const json& manifest) {
  if (!manifest.is_object()) throw ConfigError("manifest must be a JSON object");
  CommandRequest req;
  try {
    req.command = manifest.at("command").get<std::string>();
    if (manifest.contains("config")) {
      json config = ToJson(ExperimentConfig{});
      config.merge_patch(manifest.at("config"));
      req.config = ExperimentConfigFromJson(config);
    }
    if (manifest.contains("seeds")) {
      req.seeds = manifest.at("seeds").get<std::vector<std::uint64_t>>();
    }
    if (manifest.contains("threads")) req.threads = manifest.at("threads").get<int>();
    if (manifest.contains("args")) req.args = manifest.at("args");
  } catch (const json::exception& e) {
    throw ConfigError(fmt::format("malformed manifest: {}", e.what()));
  }
  return req;
}

CommandRequest LoadManifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("cannot read manifest {}", path.string()));
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(fmt::format("{}: {}", path.string(), e.what()));
  }
  return RequestFromManifest(j);
}

const std::vector<std::string>& CommandNames() {
  static const std::vector<std::string> names = {
      "augment", "train", "sweep-noise", "ablate", "eval", "gen-synthetic"};
  return names;
}

std::string RunCommand(const CommandRequest& request,
                       const std::filesystem::path& out_dir) {
  const auto& names = CommandNames();
  if (std::find(names.begin(), names.end(), request.command) == names.end()) {
    throw ConfigError(fmt::format("unknown command '{}'", request.command));
  }
  if (request.seeds.empty()) throw ConfigError("at least one seed is required");
  if (request.threads < 1) throw ConfigError("threads must be >= 1");
  if (request.command != "gen-synthetic") request.config.Validate();
  std::filesystem::create_directories(out_dir);
  json manifest = ToManifest(request);
  if (request.command == "gen-synthetic") {
    manifest["bayes_accuracy"] = SyntheticBayesAccuracy(SpecFromArgs(request.args));
  }
  WriteJson(out_dir / "manifest.json", manifest);
  spdlog::debug("{}: writing to {}", request.command, out_dir.string());

  if (request.command == "augment") return CmdAugment(request, out_dir);
  if (request.command == "train") return CmdTrain(request, out_dir);
  if (request.command == "sweep-noise") return CmdSweepNoise(request, out_dir);
  if (request.command == "ablate") return CmdAblate(request, out_dir);
  if (request.command == "eval") return CmdEval(request, out_dir);
  return CmdGenSynthetic(request, out_dir);
}

std::vector<RunReport> SweepNoise(const ExperimentInputs& inputs,
                                  const ExperimentConfig& config,
                                  const std::vector<std::string>& methods,
                                  const std::vector<double>& p_n_values,
                                  const std::vector<std::uint64_t>& seeds,
                                  const ExperimentOptions& options) {
  if (methods.empty() || p_n_values.empty()) {
    throw ConfigError("sweep needs at least one method and one p_n value");
  }
  std::vector<RunReport> reports;
  for (const auto& name : methods) {
    ExperimentConfig cell_config = config;
    cell_config.method = ParseMethod(name);
    for (double p : p_n_values) {
      cell_config.noise.p_n = p;
      RunReport r = RunExperiment(inputs, cell_config, seeds, options);
      r.cell = PnCell(p);
      reports.push_back(std::move(r));
    }
  }
  return reports;
}

std::string NoiseTableCsv(const std::vector<RunReport>& reports,
                          const std::vector<std::string>& methods,
                          const std::vector<double>& p_n_values) {
  std::string out = "method";
  for (double p : p_n_values) out += "," + PnCell(p);
  out += "\n";
  for (const auto& method : methods) {
    out += method;
    for (double p : p_n_values) {
      const std::string cell = PnCell(p);
      const auto it = std::find_if(reports.begin(), reports.end(), [&](const RunReport& r) {
        return r.method == method && (r.cell == cell || r.cell.empty());
      });
      out += it == reports.end() ? "," : fmt::format(",{}", it->mean_macro_f1);
    }
    out += "\n";
  }
  return out;
}

AblationResult Ablate(const ExperimentInputs& inputs,
                      const ExperimentConfig& config, const AblationGrid& grid,
                      const std::vector<std::uint64_t>& seeds,
                      const ExperimentOptions& options) {
  if (grid.tau.empty() || grid.alpha.empty() || grid.m.empty()) {
    throw ConfigError("ablation grid has an empty axis");
  }
  AblationResult result;
  for (double tau : grid.tau) {
    for (double alpha : grid.alpha) {
      for (int m : grid.m) {
        ExperimentConfig cell = config;
        cell.od.tau = tau;
        cell.sr.alpha = alpha;
        cell.sr.m = m;
        const auto start = std::chrono::steady_clock::now();
        RunReport r = RunExperiment(inputs, cell, seeds, options);
        result.runtime_seconds.push_back(
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
                .count());
        r.cell = fmt::format("tau={},alpha={},m={}", tau, alpha, m);
        result.reports.push_back(std::move(r));
      }
    }
  }
  for (std::size_t i = 1; i < result.reports.size(); ++i) {
    if (result.reports[i].mean_macro_f1 > result.reports[result.best].mean_macro_f1) {
      result.best = i;
    }
  }
  return result;
}

int ExitCodeFor(const std::exception& error) {
  if (dynamic_cast<const ConfigError*>(&error) ||
      dynamic_cast<const std::invalid_argument*>(&error)) {
    return 2;
  }
  if (dynamic_cast<const DataError*>(&error)) return 3;
  if (dynamic_cast<const NumericError*>(&error)) return 4;
  return 1;
}

}  // namespace odda
