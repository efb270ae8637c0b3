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

#ifndef ODDA_METRICS_H_
#define ODDA_METRICS_H_

#include <span>
#include <vector>

namespace odda {

// Dense per-class scores. Logits are unnormalized; a ProbVector sums to one.
using Logits = std::vector<double>;
using ProbVector = std::vector<double>;

// Clamp applied inside every logarithm.
inline constexpr double kLogEpsilon = 1e-12;
// Allowed deviation of a probability vector's sum from one.
inline constexpr double kNormTolerance = 1e-6;

// Throws std::invalid_argument unless entries are >= 0 and sum to one within
// kNormTolerance.
void CheckDistribution(std::span<const double> p, const char* what);

// sum_y p_y ln(p_y / max(q_y, eps)), with p_y = 0 terms contributing 0.
double KlDivergence(std::span<const double> p, std::span<const double> q);

// Per-class F1. Classes with no support and no predictions score 0.
std::vector<double> PerClassF1(std::span<const int> preds,
                               std::span<const int> golds, int num_classes);
// Unweighted mean of PerClassF1.
double MacroF1(std::span<const int> preds, std::span<const int> golds,
               int num_classes);
double Accuracy(std::span<const int> preds, std::span<const int> golds);

double Mean(std::span<const double> values);
// Population standard deviation.
double PopulationStd(std::span<const double> values);

}  // namespace odda

#endif  // ODDA_METRICS_H_
