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

#include "odda/selection.h"

#include <algorithm>
#include <map>
#include <stdexcept>

#include "fmt/format.h"
#include "odda/losses.h"

namespace odda {

Dataset SelectPerOrigin(const Dataset& pool, std::span<const double> scores,
                        int select_k, SelectOrder order) {
  if (scores.size() != pool.size()) {
    throw std::invalid_argument("one score per candidate is required");
  }
  if (select_k < 1) throw std::invalid_argument("select_k must be >= 1");
  std::map<std::int64_t, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < pool.size(); ++i) {
    const auto& origin = pool.examples[i].origin_id;
    if (!origin) {
      throw std::invalid_argument(
          "loss-based selection needs candidates mapped to an origin");
    }
    groups[*origin].push_back(i);
  }
  std::vector<std::size_t> chosen;
  for (auto& [origin, members] : groups) {
    if (members.size() < static_cast<std::size_t>(select_k)) {
      throw std::invalid_argument(
          fmt::format("origin {} has {} candidates, fewer than select_k={}",
                      origin, members.size(), select_k));
    }
    std::sort(members.begin(), members.end(), [&](std::size_t a, std::size_t b) {
      if (scores[a] != scores[b]) {
        return order == SelectOrder::kLargest ? scores[a] > scores[b]
                                              : scores[a] < scores[b];
      }
      return pool.examples[a].id < pool.examples[b].id;
    });
    chosen.insert(chosen.end(), members.begin(), members.begin() + select_k);
  }
  std::sort(chosen.begin(), chosen.end(), [&](std::size_t a, std::size_t b) {
    return pool.examples[a].id < pool.examples[b].id;
  });
  Dataset out;
  out.label_names = pool.label_names;
  out.examples.reserve(chosen.size());
  for (std::size_t i : chosen) out.examples.push_back(pool.examples[i]);
  return out;
}

std::vector<double> CandidateLosses(const Classifier& model,
                                    const Dataset& pool,
                                    std::span<const FeatureVector> features) {
  if (features.size() != pool.size()) {
    throw std::invalid_argument("one feature vector per candidate is required");
  }
  std::vector<double> losses(pool.size());
  for (std::size_t i = 0; i < pool.size(); ++i) {
    losses[i] =
        HardCe(Softmax(model.Forward(features[i])), pool.examples[i].label);
  }
  return losses;
}

Dataset EpidaStubSelect(const Dataset& pool,
                        std::span<const ProbVector> candidate_probs,
                        std::span<const std::int64_t> origin_ids,
                        std::span<const ProbVector> origin_probs,
                        int select_k) {
  if (candidate_probs.size() != pool.size() ||
      origin_ids.size() != origin_probs.size()) {
    throw std::invalid_argument("EPiDA stub: mismatched inputs");
  }
  std::map<std::int64_t, std::size_t> origin_index;
  for (std::size_t i = 0; i < origin_ids.size(); ++i) {
    origin_index[origin_ids[i]] = i;
  }
  std::vector<double> scores(pool.size());
  for (std::size_t i = 0; i < pool.size(); ++i) {
    const auto& origin = pool.examples[i].origin_id;
    if (!origin || !origin_index.contains(*origin)) {
      throw std::invalid_argument("EPiDA stub: candidate without a known origin");
    }
    scores[i] =
        KlDivergence(candidate_probs[i], origin_probs[origin_index[*origin]]);
  }
  return SelectPerOrigin(pool, scores, select_k, SelectOrder::kLargest);
}

}  // namespace odda
