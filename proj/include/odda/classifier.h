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

#ifndef ODDA_CLASSIFIER_H_
#define ODDA_CLASSIFIER_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "odda/featurizer.h"
#include "odda/metrics.h"

namespace odda {

enum class Architecture { kLinear, kMlp1 };

std::string_view ArchitectureName(Architecture arch);
Architecture ParseArchitecture(std::string_view name);

struct ModelConfig {
  Architecture architecture = Architecture::kMlp1;
  int hash_bits = 18;
  int ngram_max = 2;
  int hidden = 64;  // mlp1 only
  double dropout_rate = 0.1;
  int num_classes = 2;
  // Half-width of the uniform initializer of the mlp1 input layer.
  double init_scale = 0.1;

  // Throws ConfigError on out-of-range values.
  void Validate() const;
  std::size_t input_dim() const { return std::size_t{1} << hash_bits; }
  // Columns of the input weight matrix: hidden width for mlp1, classes for
  // linear.
  std::size_t row_width() const;

  friend bool operator==(const ModelConfig&, const ModelConfig&) = default;
};

// Binary dropout mask identified by a 64-bit key. Unit u is kept when a hash of
// (key, u) falls at or above `rate`; kept activations are scaled by
// 1 / (1 - rate). A zero rate keeps every unit with scale 1.
class DropoutMask {
 public:
  DropoutMask(std::uint64_t key, double rate);

  // The mask for dropout pass `index` of instance `instance` at `step`.
  static DropoutMask Derive(std::uint64_t root_seed, std::int64_t step,
                            std::uint64_t instance, int index, double rate);

  bool Keep(std::uint64_t unit) const;
  double Multiplier(std::uint64_t unit) const {
    return Keep(unit) ? scale_ : 0.0;
  }
  std::uint64_t key() const { return key_; }
  double rate() const { return rate_; }

 private:
  std::uint64_t key_;
  double rate_;
  double scale_;
};

// Parameter blocks. The linear model owns kInputWeights ([2^B x C]) and
// kOutputBias; mlp1 owns all four (W1 [2^B x H], b1 [H], W2 [H x C], b2 [C]).
// Matrices are row-major.
enum class ParamBlock { kInputWeights, kHiddenBias, kOutputWeights, kOutputBias };
inline constexpr ParamBlock kAllBlocks[] = {
    ParamBlock::kInputWeights, ParamBlock::kHiddenBias,
    ParamBlock::kOutputWeights, ParamBlock::kOutputBias};
std::string_view BlockName(ParamBlock block);

// Activations retained by a forward pass for the matching backward pass.
struct ForwardTrace {
  // mlp1: W1 x + b1.
  std::vector<double> pre_activation;
  // mlp1: per hidden unit. linear: per active input entry.
  std::vector<double> multiplier;
  // mlp1: relu(pre_activation) * multiplier.
  std::vector<double> hidden;
};

// Gradient accumulator. Input-weight rows are stored sparsely (only rows hit
// by an active feature); the remaining blocks are dense.
class Gradients {
 public:
  Gradients() = default;
  Gradients(std::size_t row_width, std::size_t hidden_bias,
            std::size_t output_weights, std::size_t output_bias);

  // Zero-initialized on first access.
  std::span<double> InputRow(std::uint32_t row);
  const std::vector<std::uint32_t>& rows() const { return rows_; }
  std::span<const double> RowValues(std::size_t slot) const;
  std::span<double> Dense(ParamBlock block);
  std::span<const double> Dense(ParamBlock block) const;

  // Value at flat index `index` of `block`; input weights use row * width + col.
  double Get(ParamBlock block, std::size_t index) const;
  void Scale(double factor);
  void Clear();
  // Name of the first block holding a non-finite value.
  std::optional<std::string> FindNonFinite() const;
  std::size_t row_width() const { return row_width_; }

 private:
  std::size_t row_width_ = 0;
  std::unordered_map<std::uint32_t, std::size_t> slot_;
  std::vector<std::uint32_t> rows_;
  std::vector<double> row_values_;
  std::vector<double> hidden_bias_;
  std::vector<double> output_weights_;
  std::vector<double> output_bias_;
};

class Classifier {
 public:
  Classifier() = default;

  // All parameters zero.
  static Classifier Zeros(const ModelConfig& config);
  // Linear: zeros. mlp1: W1 ~ U(-init_scale, init_scale), W2 ~ Glorot
  // uniform, zero biases; deterministic in `seed`.
  static Classifier Initialize(const ModelConfig& config, std::uint64_t seed);

  const ModelConfig& config() const { return config_; }
  int num_classes() const { return config_.num_classes; }

  // logits = W x + b (linear, dropout on the input features) or
  // W2 dropout(relu(W1 x + b1)) + b2 (mlp1). A null mask disables dropout.
  // Throws std::invalid_argument for a bucket outside the input dimension.
  Logits Forward(const FeatureVector& x, const DropoutMask* mask = nullptr,
                 ForwardTrace* trace = nullptr) const;

  // Adds d(loss)/d(params) to `grads` given d(loss)/d(logits) for the pass
  // recorded in `trace`.
  void Backward(const FeatureVector& x, const ForwardTrace& trace,
                std::span<const double> dlogits, Gradients& grads) const;

  int Predict(const FeatureVector& x) const;
  Gradients MakeGradients() const;

  std::span<double> Block(ParamBlock block);
  std::span<const double> Block(ParamBlock block) const;

  // Versioned binary checkpoint. Label names are stored alongside so that a
  // checkpoint can be evaluated on its own.
  void Save(const std::filesystem::path& path,
            const std::vector<std::string>& label_names) const;
  static Classifier Load(const std::filesystem::path& path,
                         std::vector<std::string>* label_names = nullptr);

  friend bool operator==(const Classifier&, const Classifier&) = default;

 private:
  explicit Classifier(const ModelConfig& config);

  ModelConfig config_;
  std::vector<double> input_weights_;
  std::vector<double> hidden_bias_;
  std::vector<double> output_weights_;
  std::vector<double> output_bias_;
};

// theta <- theta - lr * (g + weight_decay * theta). Throws NumericError naming
// the offending block when `grads` holds a non-finite value; the model is left
// untouched in that case. With weight_decay == 0 only rows present in `grads`
// are visited.
void SgdStep(Classifier& model, const Gradients& grads, double lr,
             double weight_decay);

}  // namespace odda

#endif  // ODDA_CLASSIFIER_H_
