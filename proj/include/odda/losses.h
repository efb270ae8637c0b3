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

#ifndef ODDA_LOSSES_H_
#define ODDA_LOSSES_H_

#include <span>
#include <utility>
#include <vector>

#include "odda/metrics.h"

namespace odda {

// q_y = exp(z_y / tau) / sum_j exp(z_j / tau), evaluated after subtracting
// max(z). Throws std::invalid_argument for tau <= 0 and NumericError for
// non-finite logits.
ProbVector TemperatureSoftmax(std::span<const double> logits, double tau);
inline ProbVector Softmax(std::span<const double> logits) {
  return TemperatureSoftmax(logits, 1.0);
}

// -ln max(p_y, eps).
double HardCe(std::span<const double> p, int label);
// -sum_y q_y ln max(p_y, eps).
double SoftCe(std::span<const double> p, std::span<const double> q);

// SoftCe(softmax(student), softmax(teacher / tau)).
double OdLoss(std::span<const double> student_logits,
              std::span<const double> teacher_logits, double tau);

// With pbar the mean of the m >= 2 inputs: (1/m) sum_i KL(pbar || p_i).
double SrLoss(std::span<const ProbVector> probs);

// softmax(losses / lambda). Throws std::invalid_argument for an empty batch or
// lambda <= 0.
std::vector<double> ReweightFactors(std::span<const double> losses,
                                    double lambda);

// alpha_c * sum_j KL(orig || aug_j).
double ConsistencyLoss(std::span<const double> orig_prob,
                       std::span<const ProbVector> aug_probs, double alpha_c);

// Gradients with respect to the logits that produced the probabilities
// (p = softmax(z)). The epsilon clamp is ignored, so these are exact whenever
// no probability underflows 1e-12.

// d HardCe(softmax(z), y) / dz = p - onehot(y).
std::vector<double> HardCeLogitGrad(std::span<const double> p, int label);
// d SoftCe(softmax(z), q) / dz = p - q.
std::vector<double> SoftCeLogitGrad(std::span<const double> p,
                                    std::span<const double> q);
// d SrLoss / dz_i for each of the m passes.
std::vector<std::vector<double>> SrLogitGrads(std::span<const ProbVector> probs);

struct ConsistencyGrads {
  std::vector<double> orig;
  std::vector<std::vector<double>> aug;
};
// Gradient of ConsistencyLoss through both the original and augmented logits.
ConsistencyGrads ConsistencyLogitGrads(std::span<const double> orig_prob,
                                       std::span<const ProbVector> aug_probs,
                                       double alpha_c);

}  // namespace odda

#endif  // ODDA_LOSSES_H_
