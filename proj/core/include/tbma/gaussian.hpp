#pragma once

#include <Eigen/Dense>

#include "tbma/config.hpp"

namespace tbma {

struct GaussianMoments {
  Eigen::VectorXd mean;
  Eigen::MatrixXd cov;
};

// Matched second-order surrogate for one cell's per-interval samples given
// (own state, other state). Slots are uncorrelated; extra_var is added to
// every diagonal entry (forwarding distortion).
GaussianMoments edge_surrogate_moments(const SystemConfig& cfg, int cell, int own,
                                       int other, double extra_var = 0.0);

// Surrogate for the stacked pair (cell 1 samples, cell 2 samples) given the
// joint state (j, k), including per-link forwarding noise and the cross-cell
// correlation each shared transmission induces between matching slots.
GaussianMoments cloud_surrogate_moments(const SystemConfig& cfg, int j, int k,
                                        double sigma2_q1, double sigma2_q2);

struct ChernoffResult {
  double value = 0.0;
  double alpha = 0.0;
  double jitter = 0.0;  // largest diagonal loading needed for factorization
};

// Chernoff divergence between two Gaussians at mixing weight alpha:
//   (1/2) log |M| / (|cov_a|^a |cov_b|^(1-a)) + (a(1-a)/2) d' M^-1 d
// with M = a cov_a + (1-a) cov_b and d the mean difference. Exactly zero at
// alpha in {0, 1}.
double chernoff_divergence(const GaussianMoments& a, const GaussianMoments& b,
                           double alpha);

// Maximizes alpha -> chernoff_divergence on [0, 1]: coarse 0.01 grid, then
// golden-section refinement to 1e-6 in alpha.
ChernoffResult max_chernoff(const GaussianMoments& a, const GaussianMoments& b);

}  // namespace tbma
