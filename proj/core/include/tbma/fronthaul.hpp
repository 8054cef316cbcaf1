#pragma once

#include <vector>

#include "tbma/config.hpp"

namespace tbma {

struct QuantizationSpec {
  double sigma2_q_cell1 = 0.0;
  double sigma2_q_cell2 = 0.0;
  double capacity = 0.0;
  // |achieved bits - capacity bits| re-evaluated at the returned noise values.
  double residual_bits1 = 0.0;
  double residual_bits2 = 0.0;
};

// Average received-signal variance per slot at a cell (state-prior averaged,
// including thermal noise). These drive the compression-noise balance.
std::vector<double> slot_variances(const SystemConfig& cfg, int cell);

// Bits per collection interval achievable on one link when each forwarded
// sample is distorted by noise of variance x. Default form:
//   (1/2) * sum_m log2((s_m + x) / x^M)   with M = s.size();
// per_dim form: sum_m (1/2) * log2(1 + s_m / x).
double rate_bits(const std::vector<double>& s, double x, bool per_dim);

// Solves rate_bits(s, x, form) == M * C for x by bisection (the left side is
// strictly decreasing in x, so the root is unique). Relative tolerance 1e-10.
// C == 0 has no finite root: throws "infinite quantization noise".
double solve_link_noise(const SystemConfig& cfg, int cell);

QuantizationSpec solve_quantization_variance(const SystemConfig& cfg);

struct RatioLimit {
  double limit = 0.0;         // lambda^(1 / (2 M^2))
  double solver_ratio = 0.0;  // solved noise / sigma2_g evaluated at sigma2_g = 1e6
};

// Claimed strong-interference ratio of forwarding noise to cross-cell
// variance, together with what the capacity balance actually yields at
// sigma2_g = 1e6 for comparison.
RatioLimit quantization_ratio_limit(const SystemConfig& cfg);

}  // namespace tbma
