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

#include "odda/metrics.h"

#include <cmath>
#include <stdexcept>
#include <string>

namespace odda {

void CheckDistribution(std::span<const double> p, const char* what) {
  double sum = 0.0;
  for (double v : p) {
    if (!(v >= 0.0)) {
      throw std::invalid_argument(std::string(what) +
                                  ": negative or non-finite probability");
    }
    sum += v;
  }
  if (std::abs(sum - 1.0) > kNormTolerance) {
    throw std::invalid_argument(std::string(what) +
                                ": probabilities do not sum to one");
  }
}

double KlDivergence(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) {
    throw std::invalid_argument("KL divergence: dimension mismatch");
  }
  CheckDistribution(p, "KL divergence p");
  CheckDistribution(q, "KL divergence q");
  double kl = 0.0;
  for (std::size_t y = 0; y < p.size(); ++y) {
    if (p[y] > 0.0) {
      kl += p[y] * (std::log(p[y]) - std::log(std::max(q[y], kLogEpsilon)));
    }
  }
  return std::max(kl, 0.0);
}

std::vector<double> PerClassF1(std::span<const int> preds,
                               std::span<const int> golds, int num_classes) {
  if (preds.size() != golds.size()) {
    throw std::invalid_argument("macro-F1: predictions and golds differ in length");
  }
  std::vector<long> tp(num_classes, 0), fp(num_classes, 0), fn(num_classes, 0);
  for (std::size_t i = 0; i < preds.size(); ++i) {
    const int p = preds[i];
    const int g = golds[i];
    if (p < 0 || p >= num_classes || g < 0 || g >= num_classes) {
      throw std::invalid_argument("macro-F1: class index out of range");
    }
    if (p == g) {
      ++tp[p];
    } else {
      ++fp[p];
      ++fn[g];
    }
  }
  std::vector<double> f1(num_classes, 0.0);
  for (int c = 0; c < num_classes; ++c) {
    const long denom = 2 * tp[c] + fp[c] + fn[c];
    if (denom > 0) f1[c] = 2.0 * static_cast<double>(tp[c]) / denom;
  }
  return f1;
}

double MacroF1(std::span<const int> preds, std::span<const int> golds,
               int num_classes) {
  if (num_classes <= 0) throw std::invalid_argument("macro-F1: no classes");
  const auto f1 = PerClassF1(preds, golds, num_classes);
  double sum = 0.0;
  for (double v : f1) sum += v;
  return sum / num_classes;
}

double Accuracy(std::span<const int> preds, std::span<const int> golds) {
  if (preds.size() != golds.size()) {
    throw std::invalid_argument("accuracy: predictions and golds differ in length");
  }
  if (preds.empty()) return 0.0;
  std::size_t correct = 0;
  for (std::size_t i = 0; i < preds.size(); ++i) correct += preds[i] == golds[i];
  return static_cast<double>(correct) / static_cast<double>(preds.size());
}

double Mean(std::span<const double> values) {
  if (values.empty()) return 0.0;
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

double PopulationStd(std::span<const double> values) {
  if (values.empty()) return 0.0;
  const double mean = Mean(values);
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return std::sqrt(ss / static_cast<double>(values.size()));
}

}  // namespace odda
