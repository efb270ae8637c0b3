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

#ifndef ODDA_TRAINER_H_
#define ODDA_TRAINER_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "odda/classifier.h"
#include "odda/config.h"
#include "odda/dataset.h"
#include "odda/featurizer.h"

namespace odda {

struct FeaturizedSet {
  std::vector<FeatureVector> features;
  std::vector<int> labels;
  std::vector<std::int64_t> ids;

  std::size_t size() const { return features.size(); }
};

FeaturizedSet FeaturizeDataset(const Dataset& dataset, const ModelConfig& model);

struct EvalMetrics {
  double macro_f1 = 0.0;
  double accuracy = 0.0;
  std::vector<double> per_class_f1;
};

// Dropout disabled; deterministic.
EvalMetrics Evaluate(const Classifier& model, const FeaturizedSet& data);
// Throws DataError when the dataset's label count differs from the model's.
EvalMetrics Evaluate(const Classifier& model, const Dataset& data);

// One line of the training log. Emitted every eval_interval steps (with the
// dev metric) and at the final step.
struct TrainLogRecord {
  std::uint64_t seed = 0;
  std::string phase;  // "teacher" or "student"
  std::int64_t step = 0;
  double ce = 0.0;
  double od = 0.0;
  double sr = 0.0;
  double total = 0.0;
  std::optional<double> dev_macro_f1;
};
nlohmann::json ToJson(const TrainLogRecord& record);

// May be called from several worker threads when seeds run in parallel.
using TrainLogSink = std::function<void(const TrainLogRecord&)>;

struct TrainOutcome {
  Classifier model;  // best-dev checkpoint
  std::int64_t steps_taken = 0;
  std::int64_t best_step = 0;
  double best_dev_macro_f1 = -1.0;
  std::vector<std::pair<std::int64_t, double>> dev_history;
  bool stopped_early = false;
  int teacher_swaps = 0;
};

// Hard-CE SGD on `train` for up to teacher_steps steps, evaluated on `dev`
// every eval_interval steps (and at the last step); returns the checkpoint
// with the best dev macro-F1. Early stopping after `patience` evaluations
// without improvement.
TrainOutcome TrainTeacher(const Dataset& train, const Dataset& dev,
                          const ExperimentConfig& config,
                          const TrainLogSink& sink = {});

// Student phase for the odda_od / odda_sr / odda_both methods: mixed batches
// with originals and augmentations in ratio 1:k, optimized with the joint
// objective. Distillation targets come from `teacher` (cached; refreshed only
// when the iterative teacher is swapped). The hard labels of `augmented` are
// read only by odda_sr.
TrainOutcome TrainStudentOdda(const Dataset& train, const Dataset& augmented,
                              const Dataset& dev, const Classifier& teacher,
                              const ExperimentConfig& config,
                              const TrainLogSink& sink = {});

// Student phase for supervised, eda, glitter, small_loss, reweight,
// consistency and epida_stub. For the selection methods `augmented` is the
// candidate pool. Throws ConfigError when a method's preconditions fail
// (e.g. consistency without origin ids).
TrainOutcome TrainBaseline(const Dataset& train, const Dataset& augmented,
                           const Dataset& dev, const Classifier& teacher,
                           const ExperimentConfig& config,
                           const TrainLogSink& sink = {});

// Dispatches on config.method.
TrainOutcome TrainStudent(const Dataset& train, const Dataset& augmented,
                          const Dataset& dev, const Classifier& teacher,
                          const ExperimentConfig& config,
                          const TrainLogSink& sink = {});

}  // namespace odda

#endif  // ODDA_TRAINER_H_
