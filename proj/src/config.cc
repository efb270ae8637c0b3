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

#include "odda/config.h"

#include <fstream>
#include <set>

#include "fmt/format.h"
#include "odda/errors.h"

namespace odda {

using nlohmann::json;

namespace {

struct MethodEntry {
  Method method;
  const char* name;
};

constexpr MethodEntry kMethods[] = {
    {Method::kSupervised, "supervised"}, {Method::kEda, "eda"},
    {Method::kGlitter, "glitter"},       {Method::kSmallLoss, "small_loss"},
    {Method::kReweight, "reweight"},     {Method::kConsistency, "consistency"},
    {Method::kEpidaStub, "epida_stub"},  {Method::kOddaOd, "odda_od"},
    {Method::kOddaSr, "odda_sr"},        {Method::kOddaBoth, "odda_both"},
};

// Reads typed fields out of one JSON object and rejects leftovers.
class SectionReader {
 public:
  SectionReader(const json& j, std::string section)
      : section_(std::move(section)) {
    if (!j.is_object()) {
      throw ConfigError(fmt::format("{} must be an object", Name()));
    }
    object_ = &j;
  }

  template <typename T>
  void Read(const char* key, T& out) {
    seen_.insert(key);
    const auto it = object_->find(key);
    if (it == object_->end()) return;
    try {
      if constexpr (std::is_same_v<T, bool>) {
        if (!it->is_boolean()) throw ConfigError("");
      } else if constexpr (std::is_arithmetic_v<T>) {
        if (!it->is_number()) throw ConfigError("");
        if (std::is_integral_v<T> && !it->is_number_integer()) {
          throw ConfigError("");
        }
      } else if constexpr (std::is_same_v<T, std::string>) {
        if (!it->is_string()) throw ConfigError("");
      }
      out = it->get<T>();
    } catch (const std::exception&) {
      throw ConfigError(fmt::format("{}.{} has the wrong type", Name(), key));
    }
  }

  void ReadOptionalSeed(const char* key, std::optional<std::uint64_t>& out) {
    seen_.insert(key);
    const auto it = object_->find(key);
    if (it == object_->end() || it->is_null()) {
      out.reset();
      return;
    }
    if (!it->is_number_integer()) {
      throw ConfigError(fmt::format("{}.{} must be an integer or null", Name(), key));
    }
    out = it->get<std::uint64_t>();
  }

  const json& Child(const char* key) {
    seen_.insert(key);
    const auto it = object_->find(key);
    return it == object_->end() ? Empty() : *it;
  }

  std::string ChildName(const char* key) const {
    return section_.empty() ? key : section_ + "." + key;
  }

  void Finish() const {
    for (const auto& [key, value] : object_->items()) {
      if (!seen_.contains(key)) {
        throw ConfigError(fmt::format("unknown config key \"{}\"",
                                      section_.empty() ? key : section_ + "." + key));
      }
    }
  }

 private:
  static const json& Empty() {
    static const json empty = json::object();
    return empty;
  }
  std::string Name() const { return section_.empty() ? "config" : section_; }

  const json* object_ = nullptr;
  std::string section_;
  std::set<std::string, std::less<>> seen_;
};

json SeedJson(const std::optional<std::uint64_t>& seed) {
  return seed ? json(*seed) : json(nullptr);
}

}  // namespace

std::string_view MethodName(Method method) {
  for (const auto& e : kMethods) {
    if (e.method == method) return e.name;
  }
  return "unknown";
}

Method ParseMethod(std::string_view name) {
  for (const auto& e : kMethods) {
    if (name == e.name) return e.method;
  }
  throw ConfigError(fmt::format("unknown method \"{}\"", name));
}

const std::vector<std::string>& AllMethodNames() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& e : kMethods) v.emplace_back(e.name);
    return v;
  }();
  return names;
}

bool UsesAugmentedLabels(Method method) {
  return method != Method::kSupervised && method != Method::kOddaOd &&
         method != Method::kOddaBoth && method != Method::kConsistency;
}

bool UsesPool(Method method) {
  return method == Method::kGlitter || method == Method::kSmallLoss ||
         method == Method::kEpidaStub;
}

void ExperimentConfig::Validate() const {
  model.Validate();
  if (!(data.fraction > 0.0 && data.fraction <= 1.0)) {
    throw ConfigError("data.fraction must lie in (0, 1]");
  }
  if (!(data.dev_fraction > 0.0 && data.dev_fraction < 1.0)) {
    throw ConfigError("data.dev_fraction must lie in (0, 1)");
  }
  if (augment.name != "eda" && augment.name != "identity" &&
      augment.name != "external-file") {
    throw ConfigError(fmt::format("unknown augmenter \"{}\"", augment.name));
  }
  if (augment.name == "external-file" && augment.external_file.empty()) {
    throw ConfigError("augment.external_file is required for external-file");
  }
  if (augment.k < 1) throw ConfigError("augment.k must be >= 1");
  for (double p : {augment.p_sr, augment.p_ri, augment.p_rs, augment.p_rd,
                   augment.corrupt_rate, noise.p_n}) {
    if (!(p >= 0.0 && p <= 1.0)) {
      throw ConfigError("probabilities must lie in [0, 1]");
    }
  }
  if (train.teacher_steps < 1 || train.student_steps < 1) {
    throw ConfigError("train.teacher_steps and train.student_steps must be >= 1");
  }
  if (train.batch_size < 1) throw ConfigError("train.batch_size must be >= 1");
  if (!(train.lr > 0.0)) throw ConfigError("train.lr must be positive");
  if (!(train.weight_decay >= 0.0)) {
    throw ConfigError("train.weight_decay must be >= 0");
  }
  if (train.eval_interval < 1 || train.eval_interval > train.student_steps) {
    throw ConfigError("train.eval_interval must lie in [1, student_steps]");
  }
  if (train.patience < 1) throw ConfigError("train.patience must be >= 1");
  if (!(od.tau > 0.0)) throw ConfigError("od.tau must be positive");
  if (!(sr.alpha >= 0.0)) throw ConfigError("sr.alpha must be >= 0");
  if (sr.m < 2) throw ConfigError("sr.m must be >= 2");
  if (baseline.select_k < 1 || baseline.select_k > baseline.pool_k) {
    throw ConfigError("baseline.select_k must lie in [1, pool_k]");
  }
  if (!(baseline.lambda > 0.0)) throw ConfigError("baseline.lambda must be positive");
  if (!(baseline.alpha_c >= 0.0)) throw ConfigError("baseline.alpha_c must be >= 0");
  if (UsesPool(method) && augment.name != "eda") {
    throw ConfigError(fmt::format("method {} needs the eda augmenter to draw a pool",
                                  MethodName(method)));
  }
}

json ToJson(const ExperimentConfig& c) {
  return {
      {"method", MethodName(c.method)},
      {"seed", c.seed},
      {"dropout_seed", SeedJson(c.dropout_seed)},
      {"data",
       {{"train", c.data.train},
        {"test", c.data.test},
        {"format", c.data.format},
        {"fraction", c.data.fraction},
        {"dev_fraction", c.data.dev_fraction}}},
      {"model",
       {{"architecture", ArchitectureName(c.model.architecture)},
        {"hash_bits", c.model.hash_bits},
        {"ngram_max", c.model.ngram_max},
        {"hidden", c.model.hidden},
        {"dropout_rate", c.model.dropout_rate},
        {"init_scale", c.model.init_scale}}},
      {"augment",
       {{"name", c.augment.name},
        {"k", c.augment.k},
        {"p_sr", c.augment.p_sr},
        {"p_ri", c.augment.p_ri},
        {"p_rs", c.augment.p_rs},
        {"p_rd", c.augment.p_rd},
        {"lexicon", c.augment.lexicon},
        {"stopwords", c.augment.stopwords},
        {"external_file", c.augment.external_file},
        {"corrupt_tokens", c.augment.corrupt_tokens},
        {"corrupt_rate", c.augment.corrupt_rate}}},
      {"noise", {{"p_n", c.noise.p_n}, {"seed", SeedJson(c.noise.seed)}}},
      {"train",
       {{"teacher_steps", c.train.teacher_steps},
        {"student_steps", c.train.student_steps},
        {"batch_size", c.train.batch_size},
        {"lr", c.train.lr},
        {"weight_decay", c.train.weight_decay},
        {"eval_interval", c.train.eval_interval},
        {"early_stopping", {{"metric", "macro_f1"}, {"patience", c.train.patience}}},
        {"iterative_teacher", c.train.iterative_teacher},
        {"warm_start", c.train.warm_start}}},
      {"od", {{"tau", c.od.tau}, {"scale_by_tau_sq", c.od.scale_by_tau_sq}}},
      {"sr",
       {{"alpha", c.sr.alpha},
        {"m", c.sr.m},
        {"shares_forward", c.sr.shares_forward}}},
      {"baseline",
       {{"pool_k", c.baseline.pool_k},
        {"select_k", c.baseline.select_k},
        {"lambda", c.baseline.lambda},
        {"alpha_c", c.baseline.alpha_c}}},
  };
}

ExperimentConfig ExperimentConfigFromJson(const json& j) {
  ExperimentConfig c;
  SectionReader top(j, "");
  std::string method = std::string(MethodName(c.method));
  top.Read("method", method);
  c.method = ParseMethod(method);
  top.Read("seed", c.seed);
  top.ReadOptionalSeed("dropout_seed", c.dropout_seed);

  SectionReader data(top.Child("data"), "data");
  data.Read("train", c.data.train);
  data.Read("test", c.data.test);
  data.Read("format", c.data.format);
  data.Read("fraction", c.data.fraction);
  data.Read("dev_fraction", c.data.dev_fraction);
  data.Finish();

  SectionReader model(top.Child("model"), "model");
  std::string arch = std::string(ArchitectureName(c.model.architecture));
  model.Read("architecture", arch);
  c.model.architecture = ParseArchitecture(arch);
  model.Read("hash_bits", c.model.hash_bits);
  model.Read("ngram_max", c.model.ngram_max);
  model.Read("hidden", c.model.hidden);
  model.Read("dropout_rate", c.model.dropout_rate);
  model.Read("init_scale", c.model.init_scale);
  model.Finish();

  SectionReader aug(top.Child("augment"), "augment");
  aug.Read("name", c.augment.name);
  aug.Read("k", c.augment.k);
  aug.Read("p_sr", c.augment.p_sr);
  aug.Read("p_ri", c.augment.p_ri);
  aug.Read("p_rs", c.augment.p_rs);
  aug.Read("p_rd", c.augment.p_rd);
  aug.Read("lexicon", c.augment.lexicon);
  aug.Read("stopwords", c.augment.stopwords);
  aug.Read("external_file", c.augment.external_file);
  aug.Read("corrupt_tokens", c.augment.corrupt_tokens);
  aug.Read("corrupt_rate", c.augment.corrupt_rate);
  aug.Finish();

  SectionReader noise(top.Child("noise"), "noise");
  noise.Read("p_n", c.noise.p_n);
  noise.ReadOptionalSeed("seed", c.noise.seed);
  noise.Finish();

  SectionReader train(top.Child("train"), "train");
  train.Read("teacher_steps", c.train.teacher_steps);
  train.Read("student_steps", c.train.student_steps);
  train.Read("batch_size", c.train.batch_size);
  train.Read("lr", c.train.lr);
  train.Read("weight_decay", c.train.weight_decay);
  train.Read("eval_interval", c.train.eval_interval);
  train.Read("iterative_teacher", c.train.iterative_teacher);
  train.Read("warm_start", c.train.warm_start);
  SectionReader early(train.Child("early_stopping"), "train.early_stopping");
  std::string metric = "macro_f1";
  early.Read("metric", metric);
  if (metric != "macro_f1") {
    throw ConfigError("train.early_stopping.metric must be macro_f1");
  }
  early.Read("patience", c.train.patience);
  early.Finish();
  train.Finish();

  SectionReader od(top.Child("od"), "od");
  od.Read("tau", c.od.tau);
  od.Read("scale_by_tau_sq", c.od.scale_by_tau_sq);
  od.Finish();

  SectionReader sr(top.Child("sr"), "sr");
  sr.Read("alpha", c.sr.alpha);
  sr.Read("m", c.sr.m);
  sr.Read("shares_forward", c.sr.shares_forward);
  sr.Finish();

  SectionReader base(top.Child("baseline"), "baseline");
  base.Read("pool_k", c.baseline.pool_k);
  base.Read("select_k", c.baseline.select_k);
  base.Read("lambda", c.baseline.lambda);
  base.Read("alpha_c", c.baseline.alpha_c);
  base.Finish();

  top.Finish();
  return c;
}

void ApplyOverride(json& j, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos || eq == 0) {
    throw ConfigError(fmt::format("override \"{}\" is not key=value", assignment));
  }
  const std::string path(assignment.substr(0, eq));
  const std::string raw(assignment.substr(eq + 1));
  json value = json::parse(raw, nullptr, /*allow_exceptions=*/false);
  if (value.is_discarded()) value = raw;

  json* node = &j;
  std::size_t start = 0;
  while (true) {
    const auto dot = path.find('.', start);
    const std::string key = path.substr(start, dot - start);
    if (key.empty()) throw ConfigError(fmt::format("bad override key \"{}\"", path));
    if (!node->is_object()) {
      throw ConfigError(fmt::format("override \"{}\" descends into a non-object", path));
    }
    if (dot == std::string::npos) {
      (*node)[key] = std::move(value);
      return;
    }
    node = &(*node)[key];
    if (node->is_null()) *node = json::object();
    start = dot + 1;
  }
}

ExperimentConfig ResolveConfig(const std::string& path,
                               const std::vector<std::string>& overrides) {
  json j = ToJson(ExperimentConfig{});
  if (!path.empty()) {
    std::ifstream in(path);
    if (!in) throw ConfigError(fmt::format("cannot open config {}", path));
    json file;
    try {
      file = json::parse(in);
    } catch (const json::exception& e) {
      throw ConfigError(fmt::format("{}: invalid JSON ({})", path, e.what()));
    }
    if (file.is_object() && file.contains("config") && file["config"].is_object()) {
      file = file["config"];
    }
    j.merge_patch(file);
  }
  for (const auto& o : overrides) ApplyOverride(j, o);
  ExperimentConfig config = ExperimentConfigFromJson(j);
  config.Validate();
  return config;
}

}  // namespace odda
