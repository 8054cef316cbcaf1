#include "tbma/likelihood.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>
#include <utility>

namespace tbma {

void validate_policy(const TruncationPolicy& policy) {
  if (!(policy.tail_tol > 0.0 && policy.tail_tol <= 1e-6))
    throw std::invalid_argument("truncation tail_tol must be in (0, 1e-6]");
  if (policy.mode == TruncationPolicy::Mode::Fixed && policy.n_max < 0)
    throw std::invalid_argument("truncation n_max must be nonnegative");
}

int poisson_truncation(double rate, double tail) {
  if (rate <= 0.0) return 0;
  const long long cap =
      static_cast<long long>(rate + 20.0 * std::sqrt(rate) + 200.0);
  long double p = std::exp(static_cast<long double>(-rate));
  long double cum = p;
  long long n = 0;
  while (1.0L - cum > static_cast<long double>(tail) && n < cap) {
    ++n;
    p *= rate / static_cast<long double>(n);
    cum += p;
  }
  return static_cast<int>(n);
}

double log_complex_gaussian(std::complex<double> y, double mean, double var) {
  const double dr = y.real() - mean;
  const double di = y.imag();
  return -std::log(M_PI * var) - (dr * dr + di * di) / var;
}

IntervalLikelihood::IntervalLikelihood(const SystemConfig& cfg, int cell, int own,
                                       int other, double extra_var,
                                       const TruncationPolicy& policy) {
  validate_policy(policy);
  const int m_eff = cfg.effective_levels();
  const bool cross = cfg.reuse_mode == ReuseMode::NonOrthogonal;
  const double base_var = cfg.noise_floor() + extra_var;
  const bool fixed = policy.mode == TruncationPolicy::Mode::Fixed;
  const std::vector<double> own_pmf = observation_pmf(cfg, cell, own);
  const std::vector<double> other_pmf =
      cross ? observation_pmf(cfg, cell == 1 ? 2 : 1, other)
            : std::vector<double>(m_eff, 0.0);

  slots_.resize(m_eff);
  for (int m = 0; m < m_eff; ++m) {
    const double rate1 = cfg.lambda * own_pmf[m];
    const double rate2 = cross ? cfg.lambda * other_pmf[m] : 0.0;
    const int n1_max = rate1 <= 0.0 ? 0
                       : fixed     ? policy.n_max
                                   : poisson_truncation(rate1, policy.tail_tol);
    const int n2_max = rate2 <= 0.0 ? 0
                       : fixed     ? policy.n_max
                                   : poisson_truncation(rate2, policy.tail_tol);

    std::vector<double> pmf1(n1_max + 1), pmf2(n2_max + 1);
    pmf1[0] = std::exp(-rate1);
    for (int n = 1; n <= n1_max; ++n) pmf1[n] = pmf1[n - 1] * rate1 / n;
    pmf2[0] = std::exp(-rate2);
    for (int n = 1; n <= n2_max; ++n) pmf2[n] = pmf2[n - 1] * rate2 / n;

    // Merge components whose (mean, variance) coincide bit-for-bit; the map
    // also fixes a deterministic component order.
    std::map<std::pair<double, double>, double> acc;
    for (int n1 = 0; n1 <= n1_max; ++n1) {
      for (int n2 = 0; n2 <= n2_max; ++n2) {
        const double mean = n1 * cfg.mu_h + n2 * cfg.mu_g;
        const double var = n1 * cfg.sigma2_h + n2 * cfg.sigma2_g + base_var;
        acc[{mean, var}] += pmf1[n1] * pmf2[n2];
      }
    }

    auto& comps = slots_[m];
    comps.reserve(acc.size());
    for (const auto& [key, w] : acc) {
      MixtureComponent c;
      c.log_weight = std::log(w);
      c.mean = key.first;
      c.var = key.second;
      c.eval_const = c.log_weight - std::log(M_PI * c.var);
      c.inv_var = 1.0 / c.var;
      comps.push_back(c);
    }
  }
}

double IntervalLikelihood::log_density(
    const std::vector<std::complex<double>>& y) const {
  if (y.size() != slots_.size())
    throw std::invalid_argument("sample length does not match slot count");
  double total = 0.0;
  for (size_t m = 0; m < slots_.size(); ++m) {
    const double yr = y[m].real();
    const double yi = y[m].imag();
    if (!std::isfinite(yr) || !std::isfinite(yi))
      throw std::invalid_argument("non-finite sample");
    // Streaming log-sum-exp over the slot's mixture components.
    double best = -std::numeric_limits<double>::infinity();
    double sum = 0.0;
    for (const MixtureComponent& c : slots_[m]) {
      const double dr = yr - c.mean;
      const double t = c.eval_const - (dr * dr + yi * yi) * c.inv_var;
      if (t > best) {
        sum = sum * std::exp(best - t) + 1.0;
        best = t;
      } else {
        sum += std::exp(t - best);
      }
    }
    const double v = best + std::log(sum);
    total += std::isfinite(v) ? v : kLogFloor;
  }
  return total;
}

double loglik_interval(const SystemConfig& cfg, int cell,
                       const std::vector<std::complex<double>>& y, int j, int k,
                       double extra_var, const TruncationPolicy& policy) {
  return IntervalLikelihood(cfg, cell, j, k, extra_var, policy).log_density(y);
}

double reference_interval_log_density(const SystemConfig& cfg, int cell, int own,
                                      int other, double extra_var,
                                      const std::vector<std::complex<double>>& y,
                                      int n_max) {
  const int m_eff = cfg.effective_levels();
  if (static_cast<int>(y.size()) != m_eff)
    throw std::invalid_argument("sample length does not match slot count");
  const bool cross = cfg.reuse_mode == ReuseMode::NonOrthogonal;
  const long double base_var = static_cast<long double>(cfg.noise_floor()) + extra_var;
  const std::vector<double> own_pmf = observation_pmf(cfg, cell, own);
  const std::vector<double> other_pmf =
      cross ? observation_pmf(cfg, cell == 1 ? 2 : 1, other)
            : std::vector<double>(m_eff, 0.0);
  const int n_cap =
      n_max > 0 ? n_max
                : static_cast<int>(
                      std::ceil(cfg.lambda + 12.0 * std::sqrt(cfg.lambda) + 20.0));

  long double total = 0.0L;
  for (int m = 0; m < m_eff; ++m) {
    const long double rate1 = cfg.lambda * own_pmf[m];
    const long double rate2 = cross ? cfg.lambda * other_pmf[m] : 0.0L;
    const int n1_max = rate1 > 0.0L ? n_cap : 0;
    const int n2_max = rate2 > 0.0L ? n_cap : 0;
    const long double yr = y[m].real();
    const long double yi = y[m].imag();
    if (!std::isfinite(y[m].real()) || !std::isfinite(y[m].imag()))
      throw std::invalid_argument("non-finite sample");

    long double f = 0.0L;
    for (int n1 = 0; n1 <= n1_max; ++n1) {
      const long double logw1 =
          rate1 > 0.0L ? n1 * std::log(rate1) - rate1 - std::lgamma(n1 + 1.0L)
                       : 0.0L;
      for (int n2 = 0; n2 <= n2_max; ++n2) {
        const long double logw2 =
            rate2 > 0.0L ? n2 * std::log(rate2) - rate2 - std::lgamma(n2 + 1.0L)
                         : 0.0L;
        const long double mean = n1 * static_cast<long double>(cfg.mu_h) +
                                 n2 * static_cast<long double>(cfg.mu_g);
        const long double var = n1 * static_cast<long double>(cfg.sigma2_h) +
                                n2 * static_cast<long double>(cfg.sigma2_g) +
                                base_var;
        const long double dr = yr - mean;
        const long double logdens =
            logw1 + logw2 - std::log(static_cast<long double>(M_PI) * var) -
            (dr * dr + yi * yi) / var;
        f += std::exp(logdens);
      }
    }
    total += f > 0.0L ? std::log(f) : static_cast<long double>(kLogFloor);
  }
  return static_cast<double>(total);
}

}  // namespace tbma
