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

#ifndef ODDA_CONFIG_H_
#define ODDA_CONFIG_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "odda/classifier.h"

namespace odda {

// Training method run in the student phase.
enum class Method {
  kSupervised,   // hard CE on the original data only
  kEda,          // hard CE on originals and augmentations
  kGlitter,      // high-loss selection from a pool, then hard CE
  kSmallLoss,    // small-loss selection from a pool, then hard CE
  kReweight,     // hard CE with per-batch softmax(loss / lambda) weights
  kConsistency,  // CE on originals + alpha_c * KL(orig || aug)
  kEpidaStub,    // teacher-KL diversity selection, then hard CE
  kOddaOd,       // distillation only (alpha = 0)
  kOddaSr,       // hard labels on augmentations + self-regularization
  kOddaBoth,     // distillation + self-regularization
};

std::string_view MethodName(Method method);
Method ParseMethod(std::string_view name);
const std::vector<std::string>& AllMethodNames();
// True for methods that read the hard labels of augmented examples.
bool UsesAugmentedLabels(Method method);
// True for methods that draw a candidate pool of pool_k per example.
bool UsesPool(Method method);

struct DataConfig {
  std::string train;
  std::string test;
  std::string format;  // "" infers from the extension
  double fraction = 1.0;
  double dev_fraction = 0.1;
};

struct AugmentSection {
  std::string name = "eda";  // eda | identity | external-file
  int k = 3;
  double p_sr = 0.05;
  double p_ri = 0.05;
  double p_rs = 0.05;
  double p_rd = 0.05;
  std::string lexicon;
  std::string stopwords;
  std::string external_file;
  // Optional token list whose occurrences are deleted from augmented texts at
  // `corrupt_rate`.
  std::string corrupt_tokens;
  double corrupt_rate = 0.0;
};

struct NoiseSection {
  double p_n = 0.0;
  std::optional<std::uint64_t> seed;  // defaults to the run seed
};

struct OdConfig {
  double tau = 1.0;
  bool scale_by_tau_sq = false;
};

struct SrConfig {
  double alpha = 5.0;
  int m = 2;
  bool shares_forward = false;
};

struct BaselineConfig {
  int pool_k = 50;
  int select_k = 3;
  double lambda = 1.0;
  double alpha_c = 10.0;
};

struct TrainSection {
  std::int64_t teacher_steps = 500;
  std::int64_t student_steps = 1000;
  int batch_size = 32;
  double lr = 0.1;
  double weight_decay = 0.0;
  std::int64_t eval_interval = 50;
  int patience = 10;  // in evaluations
  bool iterative_teacher = false;
  // Start the student from the teacher's parameters (train on the original
  // data first, then on the union).
  bool warm_start = true;
};

struct ExperimentConfig {
  Method method = Method::kOddaBoth;
  std::uint64_t seed = 1;
  std::optional<std::uint64_t> dropout_seed;  // defaults to the run seed
  DataConfig data;
  ModelConfig model;  // num_classes is taken from the data
  AugmentSection augment;
  NoiseSection noise;
  TrainSection train;
  OdConfig od;
  SrConfig sr;
  BaselineConfig baseline;

  // Throws ConfigError describing the first invalid field.
  void Validate() const;
  std::uint64_t noise_seed() const { return noise.seed.value_or(seed); }
  std::uint64_t dropout_stream_seed() const {
    return dropout_seed.value_or(seed);
  }
};

nlohmann::json ToJson(const ExperimentConfig& config);
// Strict: unknown keys and wrongly typed values are ConfigErrors. Missing keys
// keep their defaults.
ExperimentConfig ExperimentConfigFromJson(const nlohmann::json& j);

// Applies "a.b.c=value" to a JSON object. The value is parsed as JSON when
// possible and taken as a string otherwise.
void ApplyOverride(nlohmann::json& j, std::string_view assignment);

// Defaults, then the config file (if any), then overrides. A run manifest
// (an object with a "config" member) is accepted as the config file.
ExperimentConfig ResolveConfig(const std::string& path,
                               const std::vector<std::string>& overrides);

}  // namespace odda

#endif  // ODDA_CONFIG_H_
