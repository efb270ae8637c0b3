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

#include "odda/losses.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "odda/errors.h"

namespace odda {
namespace {

double SafeLog(double p) { return std::log(std::max(p, kLogEpsilon)); }

void CheckSameSize(std::size_t a, std::size_t b, const char* what) {
  if (a != b) throw std::invalid_argument(std::string(what) + ": size mismatch");
}

// Vector-Jacobian product of softmax: dz_c = p_c (g_c - <p, g>).
std::vector<double> SoftmaxVjp(std::span<const double> p,
                               std::span<const double> g) {
  double dot = 0.0;
  for (std::size_t c = 0; c < p.size(); ++c) dot += p[c] * g[c];
  std::vector<double> dz(p.size());
  for (std::size_t c = 0; c < p.size(); ++c) dz[c] = p[c] * (g[c] - dot);
  return dz;
}

}  // namespace

ProbVector TemperatureSoftmax(std::span<const double> logits, double tau) {
  if (!(tau > 0.0)) throw std::invalid_argument("temperature must be positive");
  if (logits.empty()) throw std::invalid_argument("softmax of empty logits");
  for (double z : logits) {
    if (!std::isfinite(z)) throw NumericError("non-finite logit");
  }
  const double max = *std::max_element(logits.begin(), logits.end());
  ProbVector q(logits.size());
  double sum = 0.0;
  for (std::size_t y = 0; y < logits.size(); ++y) {
    q[y] = std::exp((logits[y] - max) / tau);
    sum += q[y];
  }
  for (double& v : q) v /= sum;
  return q;
}

double HardCe(std::span<const double> p, int label) {
  if (label < 0 || static_cast<std::size_t>(label) >= p.size()) {
    throw std::invalid_argument("cross-entropy: class index out of range");
  }
  CheckDistribution(p, "cross-entropy p");
  return -SafeLog(p[label]);
}

double SoftCe(std::span<const double> p, std::span<const double> q) {
  CheckSameSize(p.size(), q.size(), "soft cross-entropy");
  CheckDistribution(p, "soft cross-entropy p");
  CheckDistribution(q, "soft cross-entropy q");
  double loss = 0.0;
  for (std::size_t y = 0; y < p.size(); ++y) {
    if (q[y] > 0.0) loss -= q[y] * SafeLog(p[y]);
  }
  return loss;
}

double OdLoss(std::span<const double> student_logits,
              std::span<const double> teacher_logits, double tau) {
  CheckSameSize(student_logits.size(), teacher_logits.size(), "OD loss");
  return SoftCe(Softmax(student_logits),
                TemperatureSoftmax(teacher_logits, tau));
}

namespace {

ProbVector MeanDistribution(std::span<const ProbVector> probs) {
  if (probs.size() < 2) {
    throw std::invalid_argument("self-regularization needs m >= 2 passes");
  }
  const std::size_t dim = probs[0].size();
  ProbVector mean(dim, 0.0);
  for (const auto& p : probs) {
    CheckSameSize(p.size(), dim, "self-regularization");
    CheckDistribution(p, "self-regularization input");
    for (std::size_t y = 0; y < dim; ++y) mean[y] += p[y];
  }
  for (double& v : mean) v /= static_cast<double>(probs.size());
  return mean;
}

// Identical passes (no dropout) must give exactly zero regardless of how the
// mean rounds.
bool AllIdentical(std::span<const ProbVector> probs) {
  return std::all_of(probs.begin(), probs.end(),
                     [&](const ProbVector& p) { return p == probs[0]; });
}

}  // namespace

double SrLoss(std::span<const ProbVector> probs) {
  const ProbVector mean = MeanDistribution(probs);
  if (AllIdentical(probs)) return 0.0;
  double loss = 0.0;
  for (const auto& p : probs) loss += KlDivergence(mean, p);
  return loss / static_cast<double>(probs.size());
}

std::vector<double> ReweightFactors(std::span<const double> losses,
                                    double lambda) {
  if (losses.empty()) throw std::invalid_argument("re-weighting an empty batch");
  if (!(lambda > 0.0)) throw std::invalid_argument("lambda must be positive");
  return TemperatureSoftmax(losses, lambda);
}

double ConsistencyLoss(std::span<const double> orig_prob,
                       std::span<const ProbVector> aug_probs, double alpha_c) {
  double sum = 0.0;
  for (const auto& q : aug_probs) sum += KlDivergence(orig_prob, q);
  return alpha_c * sum;
}

std::vector<double> HardCeLogitGrad(std::span<const double> p, int label) {
  if (label < 0 || static_cast<std::size_t>(label) >= p.size()) {
    throw std::invalid_argument("cross-entropy: class index out of range");
  }
  std::vector<double> g(p.begin(), p.end());
  g[label] -= 1.0;
  return g;
}

std::vector<double> SoftCeLogitGrad(std::span<const double> p,
                                    std::span<const double> q) {
  CheckSameSize(p.size(), q.size(), "soft cross-entropy");
  std::vector<double> g(p.size());
  for (std::size_t y = 0; y < p.size(); ++y) g[y] = p[y] - q[y];
  return g;
}

std::vector<std::vector<double>> SrLogitGrads(
    std::span<const ProbVector> probs) {
  // L = sum_y pbar_y ln pbar_y - (1/m) sum_i sum_y pbar_y ln p_iy. Taking
  // dL/dp_j and pushing it through the softmax of pass j gives
  //   dz_j = p_j * (a - <p_j, a>) + (p_j - pbar) / m,
  // with a_y = (ln pbar_y - mean_i ln p_iy) / m.
  const ProbVector mean = MeanDistribution(probs);
  const double m = static_cast<double>(probs.size());
  const std::size_t dim = mean.size();
  if (AllIdentical(probs)) {
    return std::vector<std::vector<double>>(probs.size(),
                                            std::vector<double>(dim, 0.0));
  }
  std::vector<double> a(dim, 0.0);
  for (std::size_t y = 0; y < dim; ++y) {
    double mean_log = 0.0;
    for (const auto& p : probs) mean_log += SafeLog(p[y]);
    a[y] = (SafeLog(mean[y]) - mean_log / m) / m;
  }
  std::vector<std::vector<double>> grads;
  grads.reserve(probs.size());
  for (const auto& p : probs) {
    auto dz = SoftmaxVjp(p, a);
    for (std::size_t y = 0; y < dim; ++y) dz[y] += (p[y] - mean[y]) / m;
    grads.push_back(std::move(dz));
  }
  return grads;
}

ConsistencyGrads ConsistencyLogitGrads(std::span<const double> orig_prob,
                                       std::span<const ProbVector> aug_probs,
                                       double alpha_c) {
  const std::size_t dim = orig_prob.size();
  ConsistencyGrads out;
  // dL/d(orig prob)_y = alpha_c * sum_j (ln p_y + 1 - ln q_jy); the constant
  // vanishes under the softmax Jacobian.
  std::vector<double> g(dim, 0.0);
  for (const auto& q : aug_probs) {
    CheckSameSize(q.size(), dim, "consistency loss");
    for (std::size_t y = 0; y < dim; ++y) {
      g[y] += alpha_c * (SafeLog(orig_prob[y]) - SafeLog(q[y]));
    }
    std::vector<double> dq(dim);
    for (std::size_t y = 0; y < dim; ++y) dq[y] = alpha_c * (q[y] - orig_prob[y]);
    out.aug.push_back(std::move(dq));
  }
  out.orig = SoftmaxVjp(orig_prob, g);
  return out;
}

}  // namespace odda
