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

#ifndef ODDA_OBJECTIVE_H_
#define ODDA_OBJECTIVE_H_

#include <cstdint>
#include <span>
#include <vector>

#include "odda/classifier.h"
#include "odda/featurizer.h"
#include "odda/metrics.h"

namespace odda {

// One registered loss term on a single input. Masks select dropout for the
// forward passes the term uses: cross-entropy terms take zero or one mask,
// self-regularization takes m >= 2.
enum class TermKind {
  kHardCe,       // HardCe(softmax(f(x)), label)
  kSoftCe,       // SoftCe(softmax(f(x)), target)
  kSelfReg,      // SrLoss over the m masked passes
  kConsistency,  // sum_j KL(softmax(f(x)) || softmax(f(partner_j)))
};

struct LossTerm {
  TermKind kind = TermKind::kHardCe;
  const FeatureVector* input = nullptr;
  double weight = 1.0;
  int label = -1;
  ProbVector target;
  std::vector<DropoutMask> masks;
  std::vector<const FeatureVector*> partners;
};

// Returns the unweighted value of every term. When `grads` is non-null,
// accumulates sum_t weight_t * d(value_t)/d(params) into it. Throws
// std::invalid_argument for a malformed term.
std::vector<double> EvaluateTerms(const Classifier& model,
                                  std::span<const LossTerm> terms,
                                  Gradients* grads);

// Instance keys keep dropout streams of original and augmented examples apart
// even when their ids coincide.
enum class Pool : std::uint64_t { kOriginal = 0, kAugmented = 1 };
inline std::uint64_t InstanceKey(Pool pool, std::int64_t id) {
  return (static_cast<std::uint64_t>(id) << 1) | static_cast<std::uint64_t>(pool);
}

struct OrigInstance {
  const FeatureVector* features = nullptr;
  int label = 0;
  std::int64_t id = 0;
};

// An augmented instance with either a soft teacher target (distillation) or a
// hard label. `label` is read only when `target` is null.
struct AugInstance {
  const FeatureVector* features = nullptr;
  const ProbVector* target = nullptr;
  int label = -1;
  std::int64_t id = 0;
};

struct JointLossOptions {
  double alpha = 0.0;  // self-regularization coefficient
  int m = 2;           // dropout passes
  double tau = 1.0;    // only used for the optional tau^2 scaling
  bool scale_od_by_tau_sq = false;
  // Reuse the first SR pass for the cross-entropy terms instead of a separate
  // dropout-free pass.
  bool sr_shares_forward = false;
  std::uint64_t dropout_seed = 0;
  std::int64_t step = 0;
};

struct JointLossValue {
  double ce = 0.0;  // mean hard CE over originals
  double od = 0.0;  // mean distillation (or hard CE) loss over augmented
  double sr = 0.0;  // mean SR over originals and augmented
  double total = 0.0;
};

// mean_orig CE + s * mean_aug OD + alpha * mean_all SR, where s is tau^2 when
// scale_od_by_tau_sq is set and 1 otherwise. Each mean is over the batch
// passed in; an empty pool contributes 0. SR is skipped entirely when
// alpha == 0. Masks are derived from (dropout_seed, step, instance key, pass).
JointLossValue JointLoss(const Classifier& student,
                         std::span<const OrigInstance> originals,
                         std::span<const AugInstance> augmented,
                         const JointLossOptions& options, Gradients* grads);

// softmax(teacher(x) / tau) for every input, with dropout disabled.
std::vector<ProbVector> TeacherTargets(const Classifier& teacher,
                                       std::span<const FeatureVector> inputs,
                                       double tau);

}  // namespace odda

#endif  // ODDA_OBJECTIVE_H_
