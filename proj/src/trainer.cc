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

#include "odda/trainer.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "fmt/format.h"
#include "odda/errors.h"
#include "odda/losses.h"
#include "odda/metrics.h"
#include "odda/objective.h"
#include "odda/rng.h"
#include "odda/selection.h"
#include "spdlog/spdlog.h"

namespace odda {

FeaturizedSet FeaturizeDataset(const Dataset& dataset, const ModelConfig& model) {
  FeaturizedSet out;
  out.features.reserve(dataset.size());
  for (const auto& e : dataset.examples) {
    out.features.push_back(Featurize(e.text, model.hash_bits, model.ngram_max));
    out.labels.push_back(e.label);
    out.ids.push_back(e.id);
  }
  return out;
}

EvalMetrics Evaluate(const Classifier& model, const FeaturizedSet& data) {
  std::vector<int> preds;
  preds.reserve(data.size());
  for (const auto& x : data.features) preds.push_back(model.Predict(x));
  EvalMetrics m;
  m.per_class_f1 = PerClassF1(preds, data.labels, model.num_classes());
  m.macro_f1 = Mean(m.per_class_f1);
  m.accuracy = Accuracy(preds, data.labels);
  return m;
}

EvalMetrics Evaluate(const Classifier& model, const Dataset& data) {
  if (data.num_classes() != model.num_classes()) {
    throw DataError(fmt::format("dataset has {} labels, model predicts {}",
                                data.num_classes(), model.num_classes()));
  }
  return Evaluate(model, FeaturizeDataset(data, model.config()));
}

nlohmann::json ToJson(const TrainLogRecord& r) {
  nlohmann::json j = {{"seed", r.seed}, {"phase", r.phase}, {"step", r.step},
                      {"ce", r.ce},     {"od", r.od},       {"sr", r.sr},
                      {"total", r.total}};
  if (r.dev_macro_f1) j["dev_macro_f1"] = *r.dev_macro_f1;
  return j;
}

namespace {

// Reshuffled index stream; epoch e uses the stream (seed, tag, e).
class EpochSampler {
 public:
  EpochSampler(std::size_t n, std::uint64_t seed, std::string tag)
      : order_(n), seed_(seed), tag_(std::move(tag)) {}

  std::size_t Next() {
    if (pos_ == order_.size()) Reshuffle();
    return order_[pos_++];
  }

 private:
  void Reshuffle() {
    std::iota(order_.begin(), order_.end(), std::size_t{0});
    SeededRng rng(seed_, tag_, epoch_++);
    rng.Shuffle(std::span<std::size_t>(order_));
    pos_ = 0;
  }

  std::vector<std::size_t> order_;
  std::uint64_t seed_;
  std::string tag_;
  std::uint64_t epoch_ = 0;
  std::size_t pos_ = 0;
};

ModelConfig ModelFor(const ExperimentConfig& config, const Dataset& data) {
  ModelConfig model = config.model;
  model.num_classes = data.num_classes();
  return model;
}

// Shared step loop: SGD, periodic dev evaluation, best-checkpoint tracking and
// early stopping.
class StepLoop {
 public:
  using StepFn =
      std::function<JointLossValue(std::int64_t step, const Classifier& model,
                                   Gradients& grads)>;
  using ImproveFn = std::function<void(const Classifier& model)>;

  StepLoop(const ExperimentConfig& config, std::string phase,
           std::int64_t max_steps, const FeaturizedSet& dev,
           const TrainLogSink& sink)
      : config_(config),
        phase_(std::move(phase)),
        max_steps_(max_steps),
        interval_(std::min(config.train.eval_interval, max_steps)),
        dev_(dev),
        sink_(sink) {}

  TrainOutcome Run(Classifier model, const StepFn& step_fn,
                   const ImproveFn& on_improve = {}) {
    TrainOutcome out;
    Gradients grads = model.MakeGradients();
    int evals_since_best = 0;
    for (std::int64_t step = 1; step <= max_steps_; ++step) {
      grads.Clear();
      const JointLossValue loss = step_fn(step, model, grads);
      if (!std::isfinite(loss.total)) {
        throw NumericError(
            fmt::format("{} phase: non-finite loss at step {}", phase_, step));
      }
      SgdStep(model, grads, config_.train.lr, config_.train.weight_decay);
      out.steps_taken = step;

      const bool eval_now = step % interval_ == 0 || step == max_steps_;
      if (!eval_now) continue;
      const double f1 = Evaluate(model, dev_).macro_f1;
      out.dev_history.emplace_back(step, f1);
      if (sink_) {
        sink_({config_.seed, phase_, step, loss.ce, loss.od, loss.sr, loss.total,
               f1});
      }
      if (f1 > out.best_dev_macro_f1) {
        out.best_dev_macro_f1 = f1;
        out.best_step = step;
        out.model = model;
        evals_since_best = 0;
        if (on_improve) {
          on_improve(model);
          ++out.teacher_swaps;
        }
      } else if (++evals_since_best >= config_.train.patience) {
        out.stopped_early = step < max_steps_;
        break;
      }
    }
    return out;
  }

 private:
  const ExperimentConfig& config_;
  std::string phase_;
  std::int64_t max_steps_;
  std::int64_t interval_;
  const FeaturizedSet& dev_;
  const TrainLogSink& sink_;
};

std::size_t AmplificationFactor(std::size_t n_orig, std::size_t n_aug) {
  if (n_aug == 0 || n_orig == 0) return 0;
  const auto k = static_cast<std::size_t>(
      std::llround(static_cast<double>(n_aug) / static_cast<double>(n_orig)));
  return std::max<std::size_t>(1, k);
}

// Originals and augmentations per mixed batch: floor(batch / (k + 1))
// originals (at least one), the rest augmented.
std::pair<std::size_t, std::size_t> MixedBatchShape(std::size_t batch,
                                                    std::size_t n_orig,
                                                    std::size_t n_aug) {
  const std::size_t k = AmplificationFactor(n_orig, n_aug);
  if (k == 0) return {batch, 0};
  const std::size_t originals = std::max<std::size_t>(1, batch / (k + 1));
  const std::size_t augmented = std::max<std::size_t>(1, batch - originals);
  return {originals, augmented};
}

Classifier StudentInit(const Classifier& teacher, const ExperimentConfig& config,
                       const ModelConfig& model) {
  if (config.train.warm_start) return teacher;
  return Classifier::Initialize(model, DeriveSeed(config.seed, "student_init"));
}

void CheckTeacher(const Classifier& teacher, const ModelConfig& model) {
  if (!(teacher.config() == model)) {
    throw ConfigError("teacher and student architectures differ");
  }
}

}  // namespace

TrainOutcome TrainTeacher(const Dataset& train, const Dataset& dev,
                          const ExperimentConfig& config,
                          const TrainLogSink& sink) {
  if (train.empty()) throw DataError("teacher training set is empty");
  const ModelConfig model_config = ModelFor(config, train);
  const FeaturizedSet data = FeaturizeDataset(train, model_config);
  const FeaturizedSet dev_data = FeaturizeDataset(dev, model_config);
  EpochSampler sampler(data.size(), config.seed, "teacher_batch");
  const std::size_t batch = static_cast<std::size_t>(config.train.batch_size);

  JointLossOptions options;
  options.alpha = 0.0;
  std::vector<OrigInstance> originals(batch);
  StepLoop loop(config, "teacher", config.train.teacher_steps, dev_data, sink);
  return loop.Run(
      Classifier::Initialize(model_config, DeriveSeed(config.seed, "teacher_init")),
      [&](std::int64_t step, const Classifier& model, Gradients& grads) {
        for (auto& o : originals) {
          const std::size_t i = sampler.Next();
          o = {&data.features[i], data.labels[i], data.ids[i]};
        }
        options.step = step;
        return JointLoss(model, originals, {}, options, &grads);
      });
}

TrainOutcome TrainStudentOdda(const Dataset& train, const Dataset& augmented,
                              const Dataset& dev, const Classifier& teacher,
                              const ExperimentConfig& config,
                              const TrainLogSink& sink) {
  const Method method = config.method;
  if (method != Method::kOddaOd && method != Method::kOddaSr &&
      method != Method::kOddaBoth) {
    throw ConfigError(fmt::format("{} is not a denoising method", MethodName(method)));
  }
  if (train.empty()) throw DataError("student training set is empty");
  const ModelConfig model_config = ModelFor(config, train);
  CheckTeacher(teacher, model_config);
  if (augmented.empty()) {
    spdlog::warn("no augmented data; training on the original data only");
  }
  const FeaturizedSet orig = FeaturizeDataset(train, model_config);
  const FeaturizedSet aug = FeaturizeDataset(augmented, model_config);
  const FeaturizedSet dev_data = FeaturizeDataset(dev, model_config);

  const bool distill = method != Method::kOddaSr;
  std::vector<ProbVector> targets;
  if (distill) targets = TeacherTargets(teacher, aug.features, config.od.tau);

  JointLossOptions options;
  options.alpha = method == Method::kOddaOd ? 0.0 : config.sr.alpha;
  options.m = config.sr.m;
  options.tau = config.od.tau;
  options.scale_od_by_tau_sq = config.od.scale_by_tau_sq;
  options.sr_shares_forward = config.sr.shares_forward;
  options.dropout_seed = config.dropout_stream_seed();

  const auto [n_orig, n_aug] =
      MixedBatchShape(config.train.batch_size, orig.size(), aug.size());
  EpochSampler orig_sampler(orig.size(), config.seed, "student_orig");
  EpochSampler aug_sampler(std::max<std::size_t>(aug.size(), 1), config.seed,
                           "student_aug");
  std::vector<OrigInstance> orig_batch(n_orig);
  std::vector<AugInstance> aug_batch(n_aug);

  StepLoop::ImproveFn on_improve;
  if (config.train.iterative_teacher && distill) {
    on_improve = [&](const Classifier& best) {
      targets = TeacherTargets(best, aug.features, config.od.tau);
    };
  }
  StepLoop loop(config, "student", config.train.student_steps, dev_data, sink);
  return loop.Run(
      StudentInit(teacher, config, model_config),
      [&](std::int64_t step, const Classifier& model, Gradients& grads) {
        for (auto& o : orig_batch) {
          const std::size_t i = orig_sampler.Next();
          o = {&orig.features[i], orig.labels[i], orig.ids[i]};
        }
        for (auto& a : aug_batch) {
          const std::size_t i = aug_sampler.Next();
          a.features = &aug.features[i];
          a.id = aug.ids[i];
          if (distill) {
            a.target = &targets[i];
          } else {
            a.label = aug.labels[i];
          }
        }
        options.step = step;
        return JointLoss(model, orig_batch, aug_batch, options, &grads);
      },
      on_improve);
}

namespace {

// Hard CE averaged uniformly over a mixed batch; augmented terms may carry
// extra per-instance weights (re-weighting).
JointLossValue UniformCe(const Classifier& model,
                         std::span<const OrigInstance> originals,
                         std::span<const AugInstance> augmented,
                         std::span<const double> aug_weights, Gradients& grads) {
  const double denom = static_cast<double>(originals.size() + augmented.size());
  std::vector<LossTerm> terms;
  terms.reserve(originals.size() + augmented.size());
  for (const auto& o : originals) {
    LossTerm t;
    t.input = o.features;
    t.label = o.label;
    t.weight = 1.0 / denom;
    terms.push_back(std::move(t));
  }
  for (std::size_t i = 0; i < augmented.size(); ++i) {
    LossTerm t;
    t.input = augmented[i].features;
    t.label = augmented[i].label;
    t.weight = (aug_weights.empty() ? 1.0 : aug_weights[i]) / denom;
    terms.push_back(std::move(t));
  }
  const auto values = EvaluateTerms(model, terms, &grads);
  JointLossValue out;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    out.total += terms[i].weight * values[i];
    (i < originals.size() ? out.ce : out.od) += values[i];
  }
  if (!originals.empty()) out.ce /= static_cast<double>(originals.size());
  if (!augmented.empty()) out.od /= static_cast<double>(augmented.size());
  return out;
}

}  // namespace

TrainOutcome TrainBaseline(const Dataset& train, const Dataset& augmented,
                           const Dataset& dev, const Classifier& teacher,
                           const ExperimentConfig& config,
                           const TrainLogSink& sink) {
  const Method method = config.method;
  if (method == Method::kOddaOd || method == Method::kOddaSr ||
      method == Method::kOddaBoth) {
    throw ConfigError(fmt::format("{} is not a baseline", MethodName(method)));
  }
  if (train.empty()) throw DataError("student training set is empty");
  const ModelConfig model_config = ModelFor(config, train);
  CheckTeacher(teacher, model_config);
  const FeaturizedSet orig = FeaturizeDataset(train, model_config);
  const FeaturizedSet dev_data = FeaturizeDataset(dev, model_config);
  const std::size_t batch = static_cast<std::size_t>(config.train.batch_size);
  StepLoop loop(config, "student", config.train.student_steps, dev_data, sink);
  Classifier init = StudentInit(teacher, config, model_config);

  if (method == Method::kSupervised || method == Method::kConsistency) {
    // Both draw batch_size originals per step from the same stream.
    EpochSampler sampler(orig.size(), config.seed, "student_orig");
    std::vector<std::size_t> picked(batch);
    if (method == Method::kSupervised) {
      return loop.Run(std::move(init), [&](std::int64_t, const Classifier& model,
                                           Gradients& grads) {
        std::vector<OrigInstance> originals;
        for (auto& i : picked) {
          i = sampler.Next();
          originals.push_back({&orig.features[i], orig.labels[i], orig.ids[i]});
        }
        return UniformCe(model, originals, {}, {}, grads);
      });
    }
    const FeaturizedSet aug = FeaturizeDataset(augmented, model_config);
    std::map<std::int64_t, std::vector<const FeatureVector*>> partners;
    for (std::size_t i = 0; i < augmented.size(); ++i) {
      const auto& origin = augmented.examples[i].origin_id;
      if (!origin) {
        throw ConfigError(
            "consistency training needs augmented examples mapped to their "
            "origin; this augmenter provides no mapping");
      }
      partners[*origin].push_back(&aug.features[i]);
    }
    const double alpha_c = config.baseline.alpha_c;
    return loop.Run(std::move(init), [&](std::int64_t, const Classifier& model,
                                         Gradients& grads) {
      std::vector<LossTerm> terms;
      const double n = static_cast<double>(batch);
      for (auto& i : picked) {
        i = sampler.Next();
        LossTerm ce;
        ce.input = &orig.features[i];
        ce.label = orig.labels[i];
        ce.weight = 1.0 / n;
        terms.push_back(std::move(ce));
      }
      for (std::size_t i : picked) {
        const auto it = partners.find(orig.ids[i]);
        if (it == partners.end()) continue;
        LossTerm kl;
        kl.kind = TermKind::kConsistency;
        kl.input = &orig.features[i];
        kl.partners = it->second;
        kl.weight = alpha_c / n;
        terms.push_back(std::move(kl));
      }
      const auto values = EvaluateTerms(model, terms, &grads);
      JointLossValue out;
      for (std::size_t t = 0; t < terms.size(); ++t) {
        (t < picked.size() ? out.ce : out.od) += values[t];
      }
      out.ce /= n;
      out.od *= alpha_c / n;
      out.total = out.ce + out.od;
      return out;
    });
  }

  // Mixed-batch hard-CE methods. For selection methods `augmented` is the
  // candidate pool and the training set is re-selected over time.
  const FeaturizedSet pool = FeaturizeDataset(augmented, model_config);
  std::vector<std::size_t> active(pool.size());
  std::iota(active.begin(), active.end(), std::size_t{0});
  const int select_k = config.baseline.select_k;
  std::map<std::int64_t, std::size_t> pool_index;
  for (std::size_t i = 0; i < pool.size(); ++i) pool_index[pool.ids[i]] = i;
  const auto apply_selection = [&](const Dataset& chosen) {
    active.clear();
    for (const auto& e : chosen.examples) active.push_back(pool_index.at(e.id));
  };

  std::int64_t reselect_every = 0;
  if (method == Method::kGlitter || method == Method::kSmallLoss) {
    if (augmented.empty()) throw ConfigError("selection needs a candidate pool");
    const std::size_t selected = static_cast<std::size_t>(select_k) * orig.size();
    reselect_every = static_cast<std::int64_t>(
        (orig.size() + selected + batch - 1) / batch);
  } else if (method == Method::kEpidaStub) {
    if (augmented.empty()) throw ConfigError("selection needs a candidate pool");
    std::vector<ProbVector> cand_probs;
    for (const auto& x : pool.features) cand_probs.push_back(Softmax(teacher.Forward(x)));
    std::vector<ProbVector> orig_probs;
    for (const auto& x : orig.features) orig_probs.push_back(Softmax(teacher.Forward(x)));
    apply_selection(
        EpidaStubSelect(augmented, cand_probs, orig.ids, orig_probs, select_k));
  } else if (method != Method::kEda && method != Method::kReweight) {
    throw ConfigError(fmt::format("unsupported method {}", MethodName(method)));
  }

  const std::size_t n_active = reselect_every > 0
                                   ? static_cast<std::size_t>(select_k) * orig.size()
                                   : active.size();
  const auto [n_orig, n_aug] = MixedBatchShape(batch, orig.size(), n_active);
  EpochSampler orig_sampler(orig.size(), config.seed, "student_orig");
  EpochSampler aug_sampler(std::max<std::size_t>(n_active, 1), config.seed,
                           "student_aug");
  const double lambda = config.baseline.lambda;

  return loop.Run(std::move(init), [&](std::int64_t step, const Classifier& model,
                                       Gradients& grads) {
    if (reselect_every > 0 && (step - 1) % reselect_every == 0) {
      const auto losses = CandidateLosses(model, augmented, pool.features);
      apply_selection(method == Method::kGlitter
                          ? GlitterSelect(augmented, losses, select_k)
                          : SmallLossSelect(augmented, losses, select_k));
    }
    std::vector<OrigInstance> originals;
    for (std::size_t b = 0; b < n_orig; ++b) {
      const std::size_t i = orig_sampler.Next();
      originals.push_back({&orig.features[i], orig.labels[i], orig.ids[i]});
    }
    std::vector<AugInstance> aug_batch;
    if (!active.empty()) {
      for (std::size_t b = 0; b < n_aug; ++b) {
        const std::size_t i = active[aug_sampler.Next()];
        aug_batch.push_back({&pool.features[i], nullptr, pool.labels[i], pool.ids[i]});
      }
    }
    std::vector<double> weights;
    if (method == Method::kReweight && !aug_batch.empty()) {
      std::vector<double> losses;
      for (const auto& a : aug_batch) {
        losses.push_back(HardCe(Softmax(model.Forward(*a.features)), a.label));
      }
      weights = ReweightFactors(losses, lambda);
      for (double& w : weights) w *= static_cast<double>(aug_batch.size());
    }
    return UniformCe(model, originals, aug_batch, weights, grads);
  });
}

TrainOutcome TrainStudent(const Dataset& train, const Dataset& augmented,
                          const Dataset& dev, const Classifier& teacher,
                          const ExperimentConfig& config,
                          const TrainLogSink& sink) {
  switch (config.method) {
    case Method::kOddaOd:
    case Method::kOddaSr:
    case Method::kOddaBoth:
      return TrainStudentOdda(train, augmented, dev, teacher, config, sink);
    default:
      return TrainBaseline(train, augmented, dev, teacher, config, sink);
  }
}

}  // namespace odda
