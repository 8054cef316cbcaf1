#pragma once

#include "tbma/airlink.hpp"
#include "tbma/config.hpp"
#include "tbma/likelihood.hpp"

namespace tbma {

// Binary state decision at one cell from that cell's own samples. The other
// cell's state is unknown, so each candidate state is scored with the
// conditional mixture over the interfering state. Ties resolve to state 0.
class EdgeDetector {
 public:
  EdgeDetector(const SystemConfig& cfg, int cell, double extra_var = 0.0,
               const TruncationPolicy& policy = {});

  // log of prior-conditional likelihood: log sum_k Pr(other=k | own) f(obs | own, k).
  double log_score(const CellObservation& obs, int own) const;
  int detect(const CellObservation& obs) const;

 private:
  double cond_prior_[2][2];       // [own][other] = Pr(other | own)
  IntervalLikelihood tables_[2][2];
};

// Joint MAP decision over both cell states from both cells' forwarded
// samples (each distorted by its link's noise variance). Ties resolve to the
// lexicographically smallest (j, k).
class CloudDetector {
 public:
  CloudDetector(const SystemConfig& cfg, double sigma2_q1, double sigma2_q2,
                const TruncationPolicy& policy = {});

  // log [ Pr(j, k) f(obs | j, k) ]; kLogFloor when the prior is zero.
  double log_score(const TrialObservation& obs, int j, int k) const;
  JointHypothesisIndex detect(const TrialObservation& obs) const;

 private:
  double log_prior_[2][2];
  IntervalLikelihood cell1_[2][2];  // [j][k]: cell 1 given joint state (j, k)
  IntervalLikelihood cell2_[2][2];  // [j][k]: cell 2 given joint state (j, k)
};

}  // namespace tbma
