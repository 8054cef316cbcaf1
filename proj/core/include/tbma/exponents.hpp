#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "tbma/config.hpp"
#include "tbma/fronthaul.hpp"
#include "tbma/gaussian.hpp"

namespace tbma {

// One Chernoff comparison between two candidate joint states. Edge rows carry
// the cell whose binary decision is being scored (the other index is the
// interfering state held fixed); cloud rows have cell = 0.
struct PairExponent {
  int cell = 0;
  int j0 = 0, k0 = 0;  // first hypothesis (cell-1 state, cell-2 state)
  int j1 = 0, k1 = 0;  // second hypothesis
  double value = 0.0;
  double alpha = 0.0;
  double jitter = 0.0;
};

struct ExponentReport {
  double e_edge = 0.0;
  std::vector<PairExponent> edge_breakdown;   // 2 cells x 2 interferer states
  double e_cloud = 0.0;
  std::vector<PairExponent> cloud_breakdown;  // 6 unordered state pairs
  double sigma2_q1 = 0.0;
  double sigma2_q2 = 0.0;
};

// Worst-case error exponent of the per-cell binary decision: minimum over
// cells and over the interfering state of the best Chernoff divergence
// between the two candidate surrogate laws. Requires 0 < rho < 1.
double edge_error_exponent(const SystemConfig& cfg);

// Error exponent of the central joint decision with the given per-link
// forwarding noise: minimum over all unordered pairs of joint states of the
// best Chernoff divergence between their stacked surrogate laws.
double cloud_error_exponent(const SystemConfig& cfg, double sigma2_q1,
                            double sigma2_q2);

// Convenience overload: forwarding noise from the capacity balance.
double cloud_error_exponent(const SystemConfig& cfg);

// Full report: both exponents plus the per-comparison breakdown behind each
// minimum, with the optimizing alpha and any diagonal loading used.
ExponentReport exponent_report(const SystemConfig& cfg,
                               const QuantizationSpec& spec);
ExponentReport exponent_report(const SystemConfig& cfg);

// Coefficient kappa = lambda^(1 / (2 M^2)) tying forwarding noise to the
// cross-cell variance in the strong-interference regime (M = slots in use).
double interference_limit_coefficient(const SystemConfig& cfg);

struct InterferenceLimitPoint {
  double sigma2_g = 0.0;
  double sigma2_q = 0.0;        // kappa * sigma2_g
  double edge_exponent = 0.0;
  double cloud_exponent = 0.0;
};

struct InterferenceLimitResult {
  std::vector<InterferenceLimitPoint> points;
  double limiting_exponent = 0.0;  // scale-free closed-form central limit
  double kappa = 0.0;
  bool applicable = false;  // grid reaches the strong-interference regime
  std::string note;
};

// Evaluates both exponents along a grid of growing cross-cell variances with
// forwarding noise kappa * sigma2_g, plus the closed-form limit the central
// exponent should approach (zero-mean surrogates with slot variances
// lambda * p + kappa after normalization). The edge exponent should vanish
// along the same grid. Marked inapplicable when the grid stays small.
InterferenceLimitResult interference_limit_check(
    const SystemConfig& cfg, const std::vector<double>& sigma2_g_grid);

// Default grid 10^1 .. 10^6.
InterferenceLimitResult interference_limit_check(const SystemConfig& cfg);

// Report rows: a summary line (minima plus forwarding noise), then one line
// per comparison with its exponent, optimizing alpha, and diagonal loading.
// Header: scope,cell,j0,k0,j1,k1,exponent,alpha,jitter,e_edge,e_cloud,
// sigma2_q1,sigma2_q2. Floats at 17 significant digits.
void write_exponent_report_csv(std::ostream& out, const ExponentReport& rep);
void write_exponent_report_csv(const std::string& path,
                               const ExponentReport& rep);

}  // namespace tbma
