#pragma once

#include <complex>
#include <vector>

#include "tbma/config.hpp"

namespace tbma {

// Saturation value for log-probabilities of impossible events; keeps scores
// finite so comparisons and sums stay well defined.
inline constexpr double kLogFloor = -1e300;

// How the infinite Poisson-count sums are cut off. Adaptive keeps terms until
// the dropped tail mass per marginal is below tail_tol; Fixed always sums
// counts 0..n_max (for marginals with positive rate).
struct TruncationPolicy {
  enum class Mode { Adaptive, Fixed };
  Mode mode = Mode::Adaptive;
  int n_max = 0;           // Fixed mode only
  double tail_tol = 1e-12;
};

// Throws std::invalid_argument on an out-of-range policy.
void validate_policy(const TruncationPolicy& policy);

// Smallest n with Pr[Poisson(rate) > n] <= tail.
int poisson_truncation(double rate, double tail);

// log of the circularly-symmetric complex normal density with real mean and
// the given total variance, evaluated at y.
double log_complex_gaussian(std::complex<double> y, double mean, double var);

struct MixtureComponent {
  double log_weight;
  double mean;     // real part; imaginary part is zero
  double var;      // total complex variance
  double eval_const;  // log_weight - log(pi * var)
  double inv_var;
};

// Distribution of one interval's received vector at a cell, conditioned on
// that cell's state (own) and the other cell's state (other). Each slot is a
// Poisson-mixture of complex Gaussians; components sharing identical
// (mean, variance) are merged. extra_var is added to every component
// variance (forwarding distortion). Under orthogonal reuse `other` is
// ignored: there is no cross-cell term.
class IntervalLikelihood {
 public:
  IntervalLikelihood() = default;
  IntervalLikelihood(const SystemConfig& cfg, int cell, int own, int other,
                     double extra_var = 0.0,
                     const TruncationPolicy& policy = {});

  // log density of one interval's samples (length must equal slot_count()).
  // Throws on non-finite input; underflow saturates to kLogFloor.
  double log_density(const std::vector<std::complex<double>>& y) const;

  int slot_count() const { return static_cast<int>(slots_.size()); }
  const std::vector<MixtureComponent>& slot(int m) const { return slots_[m]; }

 private:
  std::vector<std::vector<MixtureComponent>> slots_;
};

// One-shot evaluation: log density of one interval's samples at `cell` given
// own state j and other-cell state k.
double loglik_interval(const SystemConfig& cfg, int cell,
                       const std::vector<std::complex<double>>& y, int j, int k,
                       double extra_var = 0.0, const TruncationPolicy& policy = {});

// Slow reference evaluation of the same density: direct double sum to a wide
// fixed count cap (default ceil(lambda + 12 sqrt(lambda) + 20) when n_max is
// 0), extended-precision accumulation, no shared code with the class above.
double reference_interval_log_density(const SystemConfig& cfg, int cell, int own,
                                      int other, double extra_var,
                                      const std::vector<std::complex<double>>& y,
                                      int n_max = 0);

}  // namespace tbma
