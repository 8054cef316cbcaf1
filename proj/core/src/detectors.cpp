#include "tbma/detectors.hpp"

#include <algorithm>
#include <cmath>

namespace tbma {

EdgeDetector::EdgeDetector(const SystemConfig& cfg, int cell, double extra_var,
                           const TruncationPolicy& policy) {
  for (int own = 0; own < 2; ++own) {
    for (int other = 0; other < 2; ++other) {
      cond_prior_[own][other] = 2.0 * joint_prior(cfg, {own, other});
      tables_[own][other] =
          IntervalLikelihood(cfg, cell, own, other, extra_var, policy);
    }
  }
}

double EdgeDetector::log_score(const CellObservation& obs, int own) const {
  double terms[2];
  int n = 0;
  for (int other = 0; other < 2; ++other) {
    if (cond_prior_[own][other] <= 0.0) continue;
    double s = std::log(cond_prior_[own][other]);
    for (const auto& y : obs) s += tables_[own][other].log_density(y);
    terms[n++] = s;
  }
  if (n == 1) return terms[0];
  const double hi = std::max(terms[0], terms[1]);
  const double lo = std::min(terms[0], terms[1]);
  return hi + std::log1p(std::exp(lo - hi));
}

int EdgeDetector::detect(const CellObservation& obs) const {
  return log_score(obs, 1) > log_score(obs, 0) ? 1 : 0;
}

CloudDetector::CloudDetector(const SystemConfig& cfg, double sigma2_q1,
                             double sigma2_q2, const TruncationPolicy& policy) {
  for (int j = 0; j < 2; ++j) {
    for (int k = 0; k < 2; ++k) {
      const double p = joint_prior(cfg, {j, k});
      log_prior_[j][k] = p > 0.0 ? std::log(p) : kLogFloor;
      cell1_[j][k] = IntervalLikelihood(cfg, 1, j, k, sigma2_q1, policy);
      cell2_[j][k] = IntervalLikelihood(cfg, 2, k, j, sigma2_q2, policy);
    }
  }
}

double CloudDetector::log_score(const TrialObservation& obs, int j, int k) const {
  if (log_prior_[j][k] <= kLogFloor) return kLogFloor;
  double s = log_prior_[j][k];
  for (const auto& y : obs.cell1) s += cell1_[j][k].log_density(y);
  for (const auto& y : obs.cell2) s += cell2_[j][k].log_density(y);
  return s;
}

JointHypothesisIndex CloudDetector::detect(const TrialObservation& obs) const {
  JointHypothesisIndex best{0, 0};
  double best_score = log_score(obs, 0, 0);
  for (int j = 0; j < 2; ++j) {
    for (int k = 0; k < 2; ++k) {
      if (j == 0 && k == 0) continue;
      const double s = log_score(obs, j, k);
      if (s > best_score) {
        best_score = s;
        best = {j, k};
      }
    }
  }
  return best;
}

}  // namespace tbma
