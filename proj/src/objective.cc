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

#include "odda/objective.h"

#include <stdexcept>

#include "odda/losses.h"

namespace odda {
namespace {

struct Pass {
  Logits logits;
  ProbVector probs;
  ForwardTrace trace;
};

Pass RunPass(const Classifier& model, const FeatureVector& x,
             const DropoutMask* mask, bool traced) {
  Pass pass;
  pass.logits = model.Forward(x, mask, traced ? &pass.trace : nullptr);
  pass.probs = Softmax(pass.logits);
  return pass;
}

void Accumulate(const Classifier& model, const FeatureVector& x,
                const Pass& pass, std::vector<double> dlogits, double weight,
                Gradients& grads) {
  for (double& v : dlogits) v *= weight;
  model.Backward(x, pass.trace, dlogits, grads);
}

}  // namespace

std::vector<double> EvaluateTerms(const Classifier& model,
                                  std::span<const LossTerm> terms,
                                  Gradients* grads) {
  std::vector<double> values;
  values.reserve(terms.size());
  const bool traced = grads != nullptr;
  for (const LossTerm& term : terms) {
    if (term.input == nullptr) throw std::invalid_argument("loss term without input");
    switch (term.kind) {
      case TermKind::kHardCe:
      case TermKind::kSoftCe: {
        if (term.masks.size() > 1) {
          throw std::invalid_argument("cross-entropy terms take at most one mask");
        }
        const DropoutMask* mask = term.masks.empty() ? nullptr : &term.masks[0];
        const Pass pass = RunPass(model, *term.input, mask, traced);
        if (term.kind == TermKind::kHardCe) {
          values.push_back(HardCe(pass.probs, term.label));
          if (grads) {
            Accumulate(model, *term.input, pass,
                       HardCeLogitGrad(pass.probs, term.label), term.weight,
                       *grads);
          }
        } else {
          values.push_back(SoftCe(pass.probs, term.target));
          if (grads) {
            Accumulate(model, *term.input, pass,
                       SoftCeLogitGrad(pass.probs, term.target), term.weight,
                       *grads);
          }
        }
        break;
      }
      case TermKind::kSelfReg: {
        if (term.masks.size() < 2) {
          throw std::invalid_argument("self-regularization needs m >= 2 masks");
        }
        std::vector<Pass> passes;
        std::vector<ProbVector> probs;
        for (const auto& mask : term.masks) {
          passes.push_back(RunPass(model, *term.input, &mask, traced));
          probs.push_back(passes.back().probs);
        }
        values.push_back(SrLoss(probs));
        if (grads) {
          auto dz = SrLogitGrads(probs);
          for (std::size_t i = 0; i < passes.size(); ++i) {
            Accumulate(model, *term.input, passes[i], std::move(dz[i]),
                       term.weight, *grads);
          }
        }
        break;
      }
      case TermKind::kConsistency: {
        const Pass orig = RunPass(model, *term.input, nullptr, traced);
        std::vector<Pass> aug;
        std::vector<ProbVector> aug_probs;
        for (const FeatureVector* partner : term.partners) {
          if (partner == nullptr) {
            throw std::invalid_argument("consistency term with a null partner");
          }
          aug.push_back(RunPass(model, *partner, nullptr, traced));
          aug_probs.push_back(aug.back().probs);
        }
        values.push_back(ConsistencyLoss(orig.probs, aug_probs, 1.0));
        if (grads) {
          auto g = ConsistencyLogitGrads(orig.probs, aug_probs, 1.0);
          Accumulate(model, *term.input, orig, std::move(g.orig), term.weight,
                     *grads);
          for (std::size_t j = 0; j < aug.size(); ++j) {
            Accumulate(model, *term.partners[j], aug[j], std::move(g.aug[j]),
                       term.weight, *grads);
          }
        }
        break;
      }
    }
  }
  return values;
}

JointLossValue JointLoss(const Classifier& student,
                         std::span<const OrigInstance> originals,
                         std::span<const AugInstance> augmented,
                         const JointLossOptions& options, Gradients* grads) {
  if (options.alpha < 0.0) throw std::invalid_argument("alpha must be >= 0");
  const bool use_sr = options.alpha > 0.0;
  if (use_sr && options.m < 2) {
    throw std::invalid_argument("self-regularization needs m >= 2");
  }
  const double rate = student.config().dropout_rate;
  const auto masks_for = [&](std::uint64_t key) {
    std::vector<DropoutMask> masks;
    for (int i = 0; i < options.m; ++i) {
      masks.push_back(
          DropoutMask::Derive(options.dropout_seed, options.step, key, i, rate));
    }
    return masks;
  };
  const double n_orig = static_cast<double>(originals.size());
  const double n_aug = static_cast<double>(augmented.size());
  const double od_scale =
      options.scale_od_by_tau_sq ? options.tau * options.tau : 1.0;

  std::vector<LossTerm> terms;
  terms.reserve(2 * (originals.size() + augmented.size()));
  const auto add_ce = [&](LossTerm term, std::uint64_t key) {
    if (options.sr_shares_forward && use_sr) {
      term.masks = {masks_for(key).front()};
    }
    terms.push_back(std::move(term));
  };
  for (const auto& o : originals) {
    LossTerm t;
    t.kind = TermKind::kHardCe;
    t.input = o.features;
    t.label = o.label;
    t.weight = 1.0 / n_orig;
    add_ce(std::move(t), InstanceKey(Pool::kOriginal, o.id));
  }
  for (const auto& a : augmented) {
    LossTerm t;
    t.input = a.features;
    t.weight = od_scale / n_aug;
    if (a.target) {
      t.kind = TermKind::kSoftCe;
      t.target = *a.target;
    } else {
      t.kind = TermKind::kHardCe;
      t.label = a.label;
    }
    add_ce(std::move(t), InstanceKey(Pool::kAugmented, a.id));
  }
  const std::size_t n_ce_terms = terms.size();
  if (use_sr) {
    const double w = options.alpha / (n_orig + n_aug);
    for (const auto& o : originals) {
      LossTerm t;
      t.kind = TermKind::kSelfReg;
      t.input = o.features;
      t.weight = w;
      t.masks = masks_for(InstanceKey(Pool::kOriginal, o.id));
      terms.push_back(std::move(t));
    }
    for (const auto& a : augmented) {
      LossTerm t;
      t.kind = TermKind::kSelfReg;
      t.input = a.features;
      t.weight = w;
      t.masks = masks_for(InstanceKey(Pool::kAugmented, a.id));
      terms.push_back(std::move(t));
    }
  }

  const auto values = EvaluateTerms(student, terms, grads);
  JointLossValue out;
  for (std::size_t i = 0; i < originals.size(); ++i) out.ce += values[i];
  for (std::size_t i = originals.size(); i < n_ce_terms; ++i) out.od += values[i];
  for (std::size_t i = n_ce_terms; i < values.size(); ++i) out.sr += values[i];
  if (n_orig > 0) out.ce /= n_orig;
  if (n_aug > 0) out.od /= n_aug;
  if (use_sr && n_orig + n_aug > 0) out.sr /= (n_orig + n_aug);
  out.total = out.ce + od_scale * out.od + options.alpha * out.sr;
  return out;
}

std::vector<ProbVector> TeacherTargets(const Classifier& teacher,
                                       std::span<const FeatureVector> inputs,
                                       double tau) {
  std::vector<ProbVector> targets;
  targets.reserve(inputs.size());
  for (const auto& x : inputs) {
    targets.push_back(TemperatureSoftmax(teacher.Forward(x), tau));
  }
  return targets;
}

}  // namespace odda
