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

#include "odda/experiment.h"

#include <algorithm>
#include <atomic>
#include <exception>
#include <stdexcept>
#include <thread>

#include "fmt/format.h"
#include "odda/errors.h"
#include "odda/rng.h"

namespace odda {

namespace {

DataFormat FormatFor(const ExperimentConfig& config, const std::string& path) {
  return config.data.format.empty() ? FormatFromPath(path)
                                    : ParseDataFormat(config.data.format);
}

TokenSet LoadTokenSet(const std::string& path) {
  TokenSet out;
  if (path.empty()) return out;
  for (auto& w : LoadWordList(path)) out.insert(std::move(w));
  return out;
}

// Rethrows the active exception with `prefix` prepended, keeping its type.
[[noreturn]] void RethrowPrefixed(std::exception_ptr error,
                                  const std::string& prefix) {
  try {
    std::rethrow_exception(error);
  } catch (const ConfigError& e) {
    throw ConfigError(prefix + e.what());
  } catch (const DataError& e) {
    throw DataError(prefix + e.what());
  } catch (const NumericError& e) {
    throw NumericError(prefix + e.what());
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument(prefix + e.what());
  } catch (const std::exception& e) {
    throw std::runtime_error(prefix + e.what());
  }
}

}  // namespace

ExperimentInputs LoadExperimentInputs(const ExperimentConfig& config) {
  if (config.data.train.empty()) throw ConfigError("data.train is not set");
  if (config.data.test.empty()) throw ConfigError("data.test is not set");
  ExperimentInputs in;
  in.train = LoadDataset(config.data.train, FormatFor(config, config.data.train));
  in.test = LoadDatasetWithLabels(config.data.test,
                                  FormatFor(config, config.data.test),
                                  in.train.label_names);
  if (!config.augment.lexicon.empty()) {
    in.lexicon = LoadLexicon(config.augment.lexicon);
  }
  in.stopwords = LoadTokenSet(config.augment.stopwords);
  in.corrupt_tokens = LoadTokenSet(config.augment.corrupt_tokens);
  return in;
}

Augmenter MakeAugmenter(const ExperimentConfig& config,
                        const ExperimentInputs& inputs, std::uint64_t seed) {
  const auto& a = config.augment;
  const int k = UsesPool(config.method) ? config.baseline.pool_k : a.k;
  if (a.name == "eda") {
    EdaConfig eda;
    eda.p_sr = a.p_sr;
    eda.p_ri = a.p_ri;
    eda.p_rs = a.p_rs;
    eda.p_rd = a.p_rd;
    eda.k = k;
    eda.lexicon = inputs.lexicon;
    eda.stopwords = inputs.stopwords;
    return MakeEdaAugmenter(std::move(eda), seed);
  }
  if (a.name == "identity") return MakeIdentityAugmenter(k);
  if (a.name == "external-file") {
    if (a.external_file.empty()) {
      throw ConfigError("augment.external_file is required for external-file");
    }
    return MakeExternalAugmenter(a.external_file);
  }
  throw ConfigError(fmt::format("unknown augmenter '{}'", a.name));
}

PreparedData PrepareData(const ExperimentInputs& inputs,
                         const ExperimentConfig& config) {
  const std::uint64_t seed = config.seed;
  Dataset pool = inputs.train;
  if (config.data.fraction < 1.0) {
    pool = Subsample(pool, config.data.fraction, DeriveSeed(seed, "subsample"));
  }
  PreparedData out;
  std::tie(out.train, out.dev) = StratifiedSplit(pool, config.data.dev_fraction,
                                                 DeriveSeed(seed, "dev_split"));
  if (config.method != Method::kSupervised) {
    out.augmented =
        MakeAugmenter(config, inputs, DeriveSeed(seed, "augment"))(out.train);
  } else {
    out.augmented.label_names = out.train.label_names;
  }
  if (config.augment.corrupt_rate > 0.0) {
    out.augmented = DropTokens(out.augmented, inputs.corrupt_tokens,
                               config.augment.corrupt_rate,
                               DeriveSeed(seed, "corrupt"));
  }
  if (config.noise.p_n > 0.0) {
    out.augmented = FlipLabels(
        out.augmented, {config.noise.p_n, DeriveSeed(config.noise_seed(), "noise")});
  }
  return out;
}

SeedRun RunSeed(const ExperimentInputs& inputs, const ExperimentConfig& config,
                const TrainLogSink& sink) {
  const PreparedData data = PrepareData(inputs, config);
  SeedRun run;
  run.teacher = TrainTeacher(data.train, data.dev, config, sink);
  run.student = TrainStudent(data.train, data.augmented, data.dev,
                             run.teacher.model, config, sink);
  const EvalMetrics test = Evaluate(run.student.model, inputs.test);
  run.result = {config.seed, test.macro_f1, test.accuracy};
  return run;
}

RunReport RunExperiment(const ExperimentInputs& inputs,
                        const ExperimentConfig& config,
                        const std::vector<std::uint64_t>& seeds,
                        const ExperimentOptions& options) {
  if (seeds.empty()) throw ConfigError("at least one seed is required");
  config.Validate();
  std::vector<SeedResult> results(seeds.size());
  std::vector<std::exception_ptr> errors(seeds.size());
  std::atomic<std::size_t> next{0};

  const auto worker = [&] {
    for (std::size_t i = next++; i < seeds.size(); i = next++) {
      try {
        ExperimentConfig seeded = config;
        seeded.seed = seeds[i];
        SeedRun run = RunSeed(inputs, seeded, options.sink);
        results[i] = run.result;
        if (!options.checkpoint_dir.empty()) {
          std::filesystem::create_directories(options.checkpoint_dir);
          run.student.model.Save(
              options.checkpoint_dir /
                  fmt::format("{}seed{}.ckpt", options.checkpoint_prefix, seeds[i]),
              inputs.train.label_names);
        }
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };

  const std::size_t threads = std::clamp<std::size_t>(
      static_cast<std::size_t>(std::max(options.threads, 1)), 1, seeds.size());
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    if (errors[i]) RethrowPrefixed(errors[i], fmt::format("seed {}: ", seeds[i]));
  }
  return MakeRunReport(std::string(MethodName(config.method)), "",
                       std::move(results), ToJson(config));
}

}  // namespace odda
