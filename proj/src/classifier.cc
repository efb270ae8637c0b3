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

#include "odda/classifier.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include "fmt/format.h"
#include "odda/errors.h"
#include "odda/rng.h"

namespace odda {

static_assert(std::endian::native == std::endian::little,
              "checkpoint format assumes a little-endian host");

std::string_view ArchitectureName(Architecture arch) {
  return arch == Architecture::kLinear ? "linear" : "mlp1";
}

Architecture ParseArchitecture(std::string_view name) {
  if (name == "linear") return Architecture::kLinear;
  if (name == "mlp1") return Architecture::kMlp1;
  throw ConfigError(fmt::format("unknown architecture \"{}\"", name));
}

void ModelConfig::Validate() const {
  if (hash_bits < kMinHashBits || hash_bits > kMaxHashBits) {
    throw ConfigError(fmt::format("model.hash_bits must lie in [{}, {}], got {}",
                                  kMinHashBits, kMaxHashBits, hash_bits));
  }
  if (ngram_max != 1 && ngram_max != 2) {
    throw ConfigError("model.ngram_max must be 1 or 2");
  }
  if (architecture == Architecture::kMlp1 && hidden < 1) {
    throw ConfigError("model.hidden must be positive");
  }
  if (!(dropout_rate >= 0.0 && dropout_rate < 1.0)) {
    throw ConfigError("model.dropout_rate must lie in [0, 1)");
  }
  if (num_classes < 2) throw ConfigError("need at least two classes");
  if (!(init_scale >= 0.0)) throw ConfigError("model.init_scale must be >= 0");
}

std::size_t ModelConfig::row_width() const {
  return architecture == Architecture::kMlp1 ? static_cast<std::size_t>(hidden)
                                             : static_cast<std::size_t>(num_classes);
}

DropoutMask::DropoutMask(std::uint64_t key, double rate)
    : key_(key), rate_(rate), scale_(1.0 / (1.0 - rate)) {
  if (!(rate >= 0.0 && rate < 1.0)) {
    throw std::invalid_argument("dropout rate must lie in [0, 1)");
  }
}

DropoutMask DropoutMask::Derive(std::uint64_t root_seed, std::int64_t step,
                                std::uint64_t instance, int index,
                                double rate) {
  const std::uint64_t per_instance = DeriveSeed(
      root_seed, "dropout", static_cast<std::uint64_t>(step), instance);
  return DropoutMask(
      DeriveSeed(per_instance, "mask", static_cast<std::uint64_t>(index)),
      rate);
}

bool DropoutMask::Keep(std::uint64_t unit) const {
  if (rate_ == 0.0) return true;
  return ToUnit(Mix64(key_ ^ Mix64(unit))) >= rate_;
}

std::string_view BlockName(ParamBlock block) {
  switch (block) {
    case ParamBlock::kInputWeights:
      return "input_weights";
    case ParamBlock::kHiddenBias:
      return "hidden_bias";
    case ParamBlock::kOutputWeights:
      return "output_weights";
    case ParamBlock::kOutputBias:
      return "output_bias";
  }
  return "unknown";
}

// ---------------------------------------------------------------------------
// Gradients

Gradients::Gradients(std::size_t row_width, std::size_t hidden_bias,
                     std::size_t output_weights, std::size_t output_bias)
    : row_width_(row_width),
      hidden_bias_(hidden_bias, 0.0),
      output_weights_(output_weights, 0.0),
      output_bias_(output_bias, 0.0) {}

std::span<double> Gradients::InputRow(std::uint32_t row) {
  auto [it, inserted] = slot_.try_emplace(row, rows_.size());
  if (inserted) {
    rows_.push_back(row);
    row_values_.resize(row_values_.size() + row_width_, 0.0);
  }
  return {row_values_.data() + it->second * row_width_, row_width_};
}

std::span<const double> Gradients::RowValues(std::size_t slot) const {
  return {row_values_.data() + slot * row_width_, row_width_};
}

std::span<double> Gradients::Dense(ParamBlock block) {
  switch (block) {
    case ParamBlock::kHiddenBias:
      return hidden_bias_;
    case ParamBlock::kOutputWeights:
      return output_weights_;
    case ParamBlock::kOutputBias:
      return output_bias_;
    case ParamBlock::kInputWeights:
      break;
  }
  throw std::invalid_argument("input weights are stored sparsely");
}

std::span<const double> Gradients::Dense(ParamBlock block) const {
  return const_cast<Gradients*>(this)->Dense(block);
}

double Gradients::Get(ParamBlock block, std::size_t index) const {
  if (block != ParamBlock::kInputWeights) return Dense(block)[index];
  const auto it = slot_.find(static_cast<std::uint32_t>(index / row_width_));
  if (it == slot_.end()) return 0.0;
  return row_values_[it->second * row_width_ + index % row_width_];
}

void Gradients::Scale(double factor) {
  for (double& v : row_values_) v *= factor;
  for (double& v : hidden_bias_) v *= factor;
  for (double& v : output_weights_) v *= factor;
  for (double& v : output_bias_) v *= factor;
}

void Gradients::Clear() {
  slot_.clear();
  rows_.clear();
  row_values_.clear();
  std::fill(hidden_bias_.begin(), hidden_bias_.end(), 0.0);
  std::fill(output_weights_.begin(), output_weights_.end(), 0.0);
  std::fill(output_bias_.begin(), output_bias_.end(), 0.0);
}

std::optional<std::string> Gradients::FindNonFinite() const {
  const auto finite = [](const std::vector<double>& v) {
    return std::all_of(v.begin(), v.end(),
                       [](double x) { return std::isfinite(x); });
  };
  if (!finite(row_values_)) return std::string(BlockName(ParamBlock::kInputWeights));
  if (!finite(hidden_bias_)) return std::string(BlockName(ParamBlock::kHiddenBias));
  if (!finite(output_weights_)) {
    return std::string(BlockName(ParamBlock::kOutputWeights));
  }
  if (!finite(output_bias_)) return std::string(BlockName(ParamBlock::kOutputBias));
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Classifier

Classifier::Classifier(const ModelConfig& config) : config_(config) {
  config_.Validate();
  const std::size_t width = config_.row_width();
  input_weights_.assign(config_.input_dim() * width, 0.0);
  output_bias_.assign(config_.num_classes, 0.0);
  if (config_.architecture == Architecture::kMlp1) {
    hidden_bias_.assign(config_.hidden, 0.0);
    output_weights_.assign(
        static_cast<std::size_t>(config_.hidden) * config_.num_classes, 0.0);
  }
}

Classifier Classifier::Zeros(const ModelConfig& config) {
  return Classifier(config);
}

Classifier Classifier::Initialize(const ModelConfig& config,
                                  std::uint64_t seed) {
  Classifier c(config);
  if (config.architecture == Architecture::kMlp1) {
    SeededRng rng(seed, "init.input");
    for (double& w : c.input_weights_) {
      w = rng.Uniform(-config.init_scale, config.init_scale);
    }
    SeededRng out_rng(seed, "init.output");
    const double limit =
        std::sqrt(6.0 / static_cast<double>(config.hidden + config.num_classes));
    for (double& w : c.output_weights_) w = out_rng.Uniform(-limit, limit);
  }
  return c;
}

Logits Classifier::Forward(const FeatureVector& x, const DropoutMask* mask,
                           ForwardTrace* trace) const {
  const std::size_t num_classes = config_.num_classes;
  const std::size_t input_dim = config_.input_dim();
  for (const auto& [bucket, count] : x.entries) {
    if (bucket >= input_dim) {
      throw std::invalid_argument(
          fmt::format("feature bucket {} outside input dimension {}", bucket,
                      input_dim));
    }
  }
  Logits logits(output_bias_.begin(), output_bias_.end());

  if (config_.architecture == Architecture::kLinear) {
    if (trace) trace->multiplier.resize(x.entries.size());
    for (std::size_t e = 0; e < x.entries.size(); ++e) {
      const auto [bucket, count] = x.entries[e];
      const double m = mask ? mask->Multiplier(bucket) : 1.0;
      if (trace) trace->multiplier[e] = m;
      const double v = count * m;
      if (v == 0.0) continue;
      const double* row = input_weights_.data() + bucket * num_classes;
      for (std::size_t c = 0; c < num_classes; ++c) logits[c] += v * row[c];
    }
    return logits;
  }

  const std::size_t hidden = config_.hidden;
  std::vector<double> pre(hidden_bias_.begin(), hidden_bias_.end());
  for (const auto& [bucket, count] : x.entries) {
    const double* row = input_weights_.data() + bucket * hidden;
    for (std::size_t h = 0; h < hidden; ++h) pre[h] += count * row[h];
  }
  std::vector<double> mult(hidden, 1.0);
  if (mask) {
    for (std::size_t h = 0; h < hidden; ++h) mult[h] = mask->Multiplier(h);
  }
  std::vector<double> act(hidden);
  for (std::size_t h = 0; h < hidden; ++h) {
    act[h] = (pre[h] > 0.0 ? pre[h] : 0.0) * mult[h];
    if (act[h] == 0.0) continue;
    const double* row = output_weights_.data() + h * num_classes;
    for (std::size_t c = 0; c < num_classes; ++c) logits[c] += act[h] * row[c];
  }
  if (trace) {
    trace->pre_activation = std::move(pre);
    trace->multiplier = std::move(mult);
    trace->hidden = std::move(act);
  }
  return logits;
}

void Classifier::Backward(const FeatureVector& x, const ForwardTrace& trace,
                          std::span<const double> dlogits,
                          Gradients& grads) const {
  const std::size_t num_classes = config_.num_classes;
  if (dlogits.size() != num_classes) {
    throw std::invalid_argument("logit gradient has the wrong dimension");
  }
  auto gb_out = grads.Dense(ParamBlock::kOutputBias);
  for (std::size_t c = 0; c < num_classes; ++c) gb_out[c] += dlogits[c];

  if (config_.architecture == Architecture::kLinear) {
    for (std::size_t e = 0; e < x.entries.size(); ++e) {
      const auto [bucket, count] = x.entries[e];
      const double v = count * trace.multiplier[e];
      if (v == 0.0) continue;
      auto row = grads.InputRow(bucket);
      for (std::size_t c = 0; c < num_classes; ++c) row[c] += v * dlogits[c];
    }
    return;
  }

  const std::size_t hidden = config_.hidden;
  auto gw_out = grads.Dense(ParamBlock::kOutputWeights);
  auto gb_hidden = grads.Dense(ParamBlock::kHiddenBias);
  std::vector<double> dpre(hidden, 0.0);
  bool any = false;
  for (std::size_t h = 0; h < hidden; ++h) {
    const double* w_row = output_weights_.data() + h * num_classes;
    double* g_row = gw_out.data() + h * num_classes;
    double dact = 0.0;
    for (std::size_t c = 0; c < num_classes; ++c) {
      g_row[c] += trace.hidden[h] * dlogits[c];
      dact += w_row[c] * dlogits[c];
    }
    if (trace.pre_activation[h] > 0.0) {
      dpre[h] = dact * trace.multiplier[h];
      gb_hidden[h] += dpre[h];
      any = any || dpre[h] != 0.0;
    }
  }
  if (!any) return;
  for (const auto& [bucket, count] : x.entries) {
    auto row = grads.InputRow(bucket);
    for (std::size_t h = 0; h < hidden; ++h) row[h] += count * dpre[h];
  }
}

int Classifier::Predict(const FeatureVector& x) const {
  const Logits z = Forward(x);
  return static_cast<int>(std::max_element(z.begin(), z.end()) - z.begin());
}

Gradients Classifier::MakeGradients() const {
  return Gradients(config_.row_width(), hidden_bias_.size(),
                   output_weights_.size(), output_bias_.size());
}

std::span<double> Classifier::Block(ParamBlock block) {
  switch (block) {
    case ParamBlock::kInputWeights:
      return input_weights_;
    case ParamBlock::kHiddenBias:
      return hidden_bias_;
    case ParamBlock::kOutputWeights:
      return output_weights_;
    case ParamBlock::kOutputBias:
      return output_bias_;
  }
  return {};
}

std::span<const double> Classifier::Block(ParamBlock block) const {
  return const_cast<Classifier*>(this)->Block(block);
}

namespace {

constexpr char kMagic[8] = {'O', 'D', 'D', 'A', 'C', 'K', 'P', 'T'};
constexpr std::uint32_t kCheckpointVersion = 1;

template <typename T>
void WritePod(std::ofstream& out, const T& value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T ReadPod(std::ifstream& in, const std::filesystem::path& path) {
  T value{};
  in.read(reinterpret_cast<char*>(&value), sizeof(T));
  if (!in) throw DataError(fmt::format("{}: truncated checkpoint", path.string()));
  return value;
}

}  // namespace

void Classifier::Save(const std::filesystem::path& path,
                      const std::vector<std::string>& label_names) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError(fmt::format("cannot write {}", path.string()));
  out.write(kMagic, sizeof(kMagic));
  WritePod(out, kCheckpointVersion);
  WritePod(out, static_cast<std::uint32_t>(config_.architecture));
  WritePod(out, static_cast<std::int32_t>(config_.hash_bits));
  WritePod(out, static_cast<std::int32_t>(config_.ngram_max));
  WritePod(out, static_cast<std::int32_t>(config_.hidden));
  WritePod(out, static_cast<std::int32_t>(config_.num_classes));
  WritePod(out, config_.dropout_rate);
  WritePod(out, config_.init_scale);
  WritePod(out, static_cast<std::uint32_t>(label_names.size()));
  for (const auto& name : label_names) {
    WritePod(out, static_cast<std::uint32_t>(name.size()));
    out.write(name.data(), static_cast<std::streamsize>(name.size()));
  }
  for (ParamBlock block : kAllBlocks) {
    const auto values = Block(block);
    WritePod(out, static_cast<std::uint64_t>(values.size()));
    out.write(reinterpret_cast<const char*>(values.data()),
              static_cast<std::streamsize>(values.size_bytes()));
  }
  if (!out) throw DataError(fmt::format("failed writing {}", path.string()));
}

Classifier Classifier::Load(const std::filesystem::path& path,
                            std::vector<std::string>* label_names) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError(fmt::format("cannot open {}", path.string()));
  char magic[8];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
    throw DataError(fmt::format("{}: not a model checkpoint", path.string()));
  }
  const auto version = ReadPod<std::uint32_t>(in, path);
  if (version != kCheckpointVersion) {
    throw DataError(fmt::format("{}: unsupported checkpoint version {}",
                                path.string(), version));
  }
  ModelConfig config;
  const auto arch = ReadPod<std::uint32_t>(in, path);
  if (arch > 1) throw DataError(fmt::format("{}: bad architecture tag", path.string()));
  config.architecture = static_cast<Architecture>(arch);
  config.hash_bits = ReadPod<std::int32_t>(in, path);
  config.ngram_max = ReadPod<std::int32_t>(in, path);
  config.hidden = ReadPod<std::int32_t>(in, path);
  config.num_classes = ReadPod<std::int32_t>(in, path);
  config.dropout_rate = ReadPod<double>(in, path);
  config.init_scale = ReadPod<double>(in, path);
  const auto n_labels = ReadPod<std::uint32_t>(in, path);
  std::vector<std::string> names(n_labels);
  for (auto& name : names) {
    name.resize(ReadPod<std::uint32_t>(in, path));
    in.read(name.data(), static_cast<std::streamsize>(name.size()));
  }
  Classifier c(config);
  for (ParamBlock block : kAllBlocks) {
    auto values = c.Block(block);
    if (ReadPod<std::uint64_t>(in, path) != values.size()) {
      throw DataError(fmt::format("{}: block {} has the wrong size",
                                  path.string(), BlockName(block)));
    }
    in.read(reinterpret_cast<char*>(values.data()),
            static_cast<std::streamsize>(values.size_bytes()));
    if (!in) throw DataError(fmt::format("{}: truncated checkpoint", path.string()));
  }
  if (label_names) *label_names = std::move(names);
  return c;
}

void SgdStep(Classifier& model, const Gradients& grads, double lr,
             double weight_decay) {
  if (const auto bad = grads.FindNonFinite()) {
    throw NumericError(fmt::format("non-finite gradient in {}", *bad));
  }
  const std::size_t width = grads.row_width();
  auto weights = model.Block(ParamBlock::kInputWeights);
  if (weight_decay == 0.0) {
    for (std::size_t slot = 0; slot < grads.rows().size(); ++slot) {
      double* row = weights.data() + grads.rows()[slot] * width;
      const auto g = grads.RowValues(slot);
      for (std::size_t j = 0; j < width; ++j) row[j] -= lr * g[j];
    }
  } else {
    std::vector<const double*> row_grad(weights.size() / width, nullptr);
    for (std::size_t slot = 0; slot < grads.rows().size(); ++slot) {
      row_grad[grads.rows()[slot]] = grads.RowValues(slot).data();
    }
    for (std::size_t r = 0; r < row_grad.size(); ++r) {
      double* row = weights.data() + r * width;
      const double* g = row_grad[r];
      for (std::size_t j = 0; j < width; ++j) {
        row[j] -= lr * ((g ? g[j] : 0.0) + weight_decay * row[j]);
      }
    }
  }
  for (ParamBlock block : {ParamBlock::kHiddenBias, ParamBlock::kOutputWeights,
                           ParamBlock::kOutputBias}) {
    auto theta = model.Block(block);
    const auto g = grads.Dense(block);
    for (std::size_t i = 0; i < theta.size(); ++i) {
      theta[i] -= lr * (g[i] + weight_decay * theta[i]);
    }
  }
}

}  // namespace odda
