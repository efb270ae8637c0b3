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

#ifndef ODDA_SELECTION_H_
#define ODDA_SELECTION_H_

#include <span>
#include <vector>

#include "odda/classifier.h"
#include "odda/dataset.h"
#include "odda/featurizer.h"
#include "odda/metrics.h"

namespace odda {

enum class SelectOrder { kLargest, kSmallest };

// Keeps, for every origin, the `select_k` candidates with the largest (or
// smallest) score; ties go to the lower candidate id. The result is ordered by
// candidate id. Throws std::invalid_argument when a candidate lacks an origin
// id or an origin has fewer than `select_k` candidates.
Dataset SelectPerOrigin(const Dataset& pool, std::span<const double> scores,
                        int select_k, SelectOrder order);

// Hard-label cross-entropy of every candidate under `model`, dropout off.
std::vector<double> CandidateLosses(const Classifier& model,
                                    const Dataset& pool,
                                    std::span<const FeatureVector> features);

// High-loss selection (Glitter-style).
inline Dataset GlitterSelect(const Dataset& pool, std::span<const double> losses,
                             int select_k) {
  return SelectPerOrigin(pool, losses, select_k, SelectOrder::kLargest);
}

// Small-loss selection.
inline Dataset SmallLossSelect(const Dataset& pool,
                               std::span<const double> losses, int select_k) {
  return SelectPerOrigin(pool, losses, select_k, SelectOrder::kSmallest);
}

// Diversity proxy standing in for EPiDA's scoring: a candidate scores
// KL(teacher(candidate) || teacher(origin)); the largest scores are kept.
// `origin_probs` is indexed like `origin_ids`.
Dataset EpidaStubSelect(const Dataset& pool,
                        std::span<const ProbVector> candidate_probs,
                        std::span<const std::int64_t> origin_ids,
                        std::span<const ProbVector> origin_probs, int select_k);

}  // namespace odda

#endif  // ODDA_SELECTION_H_
