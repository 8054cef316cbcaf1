#include "tbma/fronthaul.hpp"

#include <cmath>
#include <stdexcept>

namespace tbma {

std::vector<double> slot_variances(const SystemConfig& cfg, int cell) {
  const int m_eff = cfg.effective_levels();
  const bool cross = cfg.reuse_mode == ReuseMode::NonOrthogonal;
  const double w0 = cfg.noise_floor();
  const std::vector<double> own0 = observation_pmf(cfg, cell, 0);
  const std::vector<double> own1 = observation_pmf(cfg, cell, 1);
  std::vector<double> s(m_eff);
  if (cross) {
    const int other = cell == 1 ? 2 : 1;
    const std::vector<double> oth0 = observation_pmf(cfg, other, 0);
    const std::vector<double> oth1 = observation_pmf(cfg, other, 1);
    for (int m = 0; m < m_eff; ++m) {
      s[m] = cfg.lambda * cfg.sigma2_h * 0.5 * (own0[m] + own1[m]) +
             cfg.lambda * cfg.sigma2_g * 0.5 * (oth0[m] + oth1[m]) + w0;
    }
  } else {
    for (int m = 0; m < m_eff; ++m)
      s[m] = cfg.lambda * cfg.sigma2_h * 0.5 * (own0[m] + own1[m]) + w0;
  }
  return s;
}

double rate_bits(const std::vector<double>& s, double x, bool per_dim) {
  const double m = static_cast<double>(s.size());
  double bits = 0.0;
  if (per_dim) {
    for (double sm : s) bits += 0.5 * std::log2(1.0 + sm / x);
  } else {
    for (double sm : s) bits += 0.5 * (std::log2(sm + x) - m * std::log2(x));
  }
  return bits;
}

double solve_link_noise(const SystemConfig& cfg, int cell) {
  if (!(cfg.fronthaul_capacity > 0.0))
    throw std::invalid_argument("infinite quantization noise");
  const std::vector<double> s = slot_variances(cfg, cell);
  const double target = static_cast<double>(s.size()) * cfg.fronthaul_capacity;
  auto excess = [&](double x) { return rate_bits(s, x, cfg.per_dim_form) - target; };

  double lo = 1e-12;
  for (int i = 0; i < 200 && excess(lo) < 0.0; ++i) lo /= 1024.0;
  if (excess(lo) < 0.0)
    throw std::runtime_error("capacity balance has no root above zero");
  double hi = std::max(1.0, 2.0 * lo);
  for (int i = 0; i < 2000 && excess(hi) > 0.0; ++i) hi *= 2.0;
  if (excess(hi) > 0.0)
    throw std::runtime_error("capacity balance has no finite root");

  for (int i = 0; i < 400 && (hi - lo) > 1e-10 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (excess(mid) > 0.0)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

QuantizationSpec solve_quantization_variance(const SystemConfig& cfg) {
  QuantizationSpec out;
  out.capacity = cfg.fronthaul_capacity;
  out.sigma2_q_cell1 = solve_link_noise(cfg, 1);
  out.sigma2_q_cell2 = solve_link_noise(cfg, 2);
  const std::vector<double> s1 = slot_variances(cfg, 1);
  const std::vector<double> s2 = slot_variances(cfg, 2);
  const double t1 = static_cast<double>(s1.size()) * cfg.fronthaul_capacity;
  const double t2 = static_cast<double>(s2.size()) * cfg.fronthaul_capacity;
  out.residual_bits1 =
      std::abs(rate_bits(s1, out.sigma2_q_cell1, cfg.per_dim_form) - t1);
  out.residual_bits2 =
      std::abs(rate_bits(s2, out.sigma2_q_cell2, cfg.per_dim_form) - t2);
  return out;
}

RatioLimit quantization_ratio_limit(const SystemConfig& cfg) {
  RatioLimit out;
  const double m = static_cast<double>(cfg.effective_levels());
  out.limit = std::pow(cfg.lambda, 1.0 / (2.0 * m * m));
  SystemConfig probe = cfg;
  probe.sigma2_g = 1e6;
  out.solver_ratio = solve_link_noise(probe, 1) / probe.sigma2_g;
  return out;
}

}  // namespace tbma
