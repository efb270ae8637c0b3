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

#ifndef ODDA_EXPERIMENT_H_
#define ODDA_EXPERIMENT_H_

#include <cstdint>
#include <filesystem>
#include <vector>

#include "odda/augment.h"
#include "odda/config.h"
#include "odda/dataset.h"
#include "odda/report.h"
#include "odda/trainer.h"

namespace odda {

// Everything a run reads from disk, loaded once and shared by all seeds.
struct ExperimentInputs {
  Dataset train;
  Dataset test;  // mapped onto the training label set
  Lexicon lexicon;
  TokenSet stopwords;
  TokenSet corrupt_tokens;
};

// Throws DataError for unreadable inputs and ConfigError when a required path
// is missing.
ExperimentInputs LoadExperimentInputs(const ExperimentConfig& config);

// The augmenter selected by config.augment. Selection methods draw pool_k
// variants per example instead of k.
Augmenter MakeAugmenter(const ExperimentConfig& config,
                        const ExperimentInputs& inputs, std::uint64_t seed);

// The per-seed data pipeline up to training: subsample, dev split, augment,
// optional token corruption, label-flip noise.
struct PreparedData {
  Dataset train;
  Dataset dev;
  Dataset augmented;
};
PreparedData PrepareData(const ExperimentInputs& inputs,
                         const ExperimentConfig& config);

struct SeedRun {
  SeedResult result;
  TrainOutcome teacher;
  TrainOutcome student;
};

// Full pipeline for config.seed: prepare, train the teacher, train the
// student with config.method, evaluate on the test set.
SeedRun RunSeed(const ExperimentInputs& inputs, const ExperimentConfig& config,
                const TrainLogSink& sink = {});

struct ExperimentOptions {
  int threads = 1;
  TrainLogSink sink;
  // When set, student checkpoints are written as <dir>/<prefix>seed<N>.ckpt.
  std::filesystem::path checkpoint_dir;
  std::string checkpoint_prefix;
};

// Runs every seed (in a bounded worker pool) and aggregates the test metrics.
// Per-seed results are ordered as `seeds`, independent of scheduling. A
// failure is rethrown with the failing seed named; when several seeds fail,
// the first in `seeds` order wins.
RunReport RunExperiment(const ExperimentInputs& inputs,
                        const ExperimentConfig& config,
                        const std::vector<std::uint64_t>& seeds,
                        const ExperimentOptions& options = {});

}  // namespace odda

#endif  // ODDA_EXPERIMENT_H_
