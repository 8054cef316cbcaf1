#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "tbma/rng.hpp"

namespace tbma {

enum class ReuseMode { NonOrthogonal, Orthogonal };

// Binary state per cell: index into {theta_0, theta_1}.
struct QoiPair {
  int theta1 = 0;
  int theta2 = 0;
};

// Joint hypothesis H_jk: cell 1 in state theta_j, cell 2 in state theta_k.
struct JointHypothesisIndex {
  int j = 0;
  int k = 0;
};

struct SystemConfig {
  double lambda = 4.0;             // mean active devices per cell per interval
  double snr_db = 3.0;
  int m_levels = 4;                // observation levels M
  int l_intervals = 5;             // collection intervals L
  double rho = 0.85;               // Pr[both cells share the same state]
  double fronthaul_capacity = 5.0; // C, bit/s/Hz per link
  double mu_h = 1.0;               // in-cell channel mean
  double sigma2_h = 1.0;           // in-cell channel variance (total complex)
  double mu_g = 1.0;               // cross-cell channel mean
  double sigma2_g = 1.0;           // cross-cell channel variance
  ReuseMode reuse_mode = ReuseMode::NonOrthogonal;
  std::vector<double> pmf_cell1_h0 = {0.4, 0.3, 0.2, 0.1};
  std::vector<double> pmf_cell1_h1 = {0.1, 0.2, 0.3, 0.4};
  std::vector<double> pmf_cell2_h0 = {0.4, 0.3, 0.2, 0.1};
  std::vector<double> pmf_cell2_h1 = {0.1, 0.2, 0.3, 0.4};
  bool per_dim_form = false;       // alternate fronthaul rate balance (see fronthaul.hpp)

  double snr_linear() const { return std::pow(10.0, snr_db / 10.0); }
  double noise_floor() const { return 1.0 / snr_linear(); }  // W_0 with E_s = 1

  // Number of waveform slots actually in use: M, or M/2 under orthogonal
  // reuse (each cell keeps half the levels and sees no interference).
  int effective_levels() const {
    return reuse_mode == ReuseMode::Orthogonal ? m_levels / 2 : m_levels;
  }
  double eff_mu_g() const {
    return reuse_mode == ReuseMode::Orthogonal ? 0.0 : mu_g;
  }
  double eff_sigma2_g() const {
    return reuse_mode == ReuseMode::Orthogonal ? 0.0 : sigma2_g;
  }
};

// Throws std::invalid_argument naming the first violated rule; returns the
// config unchanged otherwise.
SystemConfig validate_config(const SystemConfig& cfg);

double joint_prior(const SystemConfig& cfg, JointHypothesisIndex h);

// Exact sampler for the two-cell state prior; marginals are uniform.
QoiPair sample_qoi_pair(const SystemConfig& cfg, Rng& rng);

// Observation distribution for (cell, state). Under orthogonal reuse this is
// the coarsened M/2-level distribution with entry m = p(2m-1) + p(2m).
std::vector<double> observation_pmf(const SystemConfig& cfg, int cell, int hyp);

// Line-oriented "key = value" text; '#' starts a comment; pmfs are
// comma-separated. Unknown keys are errors. Returns a validated config.
SystemConfig parse_config(const std::string& text);
SystemConfig load_config_file(const std::string& path);

}  // namespace tbma
