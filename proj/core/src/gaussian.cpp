#include "tbma/gaussian.hpp"

#include <cmath>
#include <stdexcept>

namespace tbma {

GaussianMoments edge_surrogate_moments(const SystemConfig& cfg, int cell, int own,
                                       int other, double extra_var) {
  const int m_eff = cfg.effective_levels();
  const double mu_g = cfg.eff_mu_g();
  const double s2_g = cfg.eff_sigma2_g();
  const bool cross = cfg.reuse_mode == ReuseMode::NonOrthogonal;
  const std::vector<double> own_pmf = observation_pmf(cfg, cell, own);
  const std::vector<double> oth_pmf =
      cross ? observation_pmf(cfg, cell == 1 ? 2 : 1, other)
            : std::vector<double>(m_eff, 0.0);

  GaussianMoments out;
  out.mean = Eigen::VectorXd::Zero(m_eff);
  out.cov = Eigen::MatrixXd::Zero(m_eff, m_eff);
  for (int m = 0; m < m_eff; ++m) {
    out.mean(m) =
        cfg.lambda * (cfg.mu_h * own_pmf[m] + mu_g * oth_pmf[m]);
    out.cov(m, m) = cfg.lambda * (cfg.sigma2_h * own_pmf[m] + s2_g * oth_pmf[m]) +
                    cfg.noise_floor() + extra_var;
  }
  return out;
}

GaussianMoments cloud_surrogate_moments(const SystemConfig& cfg, int j, int k,
                                        double sigma2_q1, double sigma2_q2) {
  const int m_eff = cfg.effective_levels();
  const GaussianMoments c1 = edge_surrogate_moments(cfg, 1, j, k, sigma2_q1);
  const GaussianMoments c2 = edge_surrogate_moments(cfg, 2, k, j, sigma2_q2);
  const std::vector<double> p1 = observation_pmf(cfg, 1, j);
  const std::vector<double> p2 = observation_pmf(cfg, 2, k);
  const double mu_g = cfg.eff_mu_g();

  GaussianMoments out;
  out.mean = Eigen::VectorXd::Zero(2 * m_eff);
  out.cov = Eigen::MatrixXd::Zero(2 * m_eff, 2 * m_eff);
  out.mean.head(m_eff) = c1.mean;
  out.mean.tail(m_eff) = c2.mean;
  out.cov.topLeftCorner(m_eff, m_eff) = c1.cov;
  out.cov.bottomRightCorner(m_eff, m_eff) = c2.cov;
  for (int m = 0; m < m_eff; ++m) {
    const double r = cfg.lambda * cfg.mu_h * mu_g *
                     (p1[m] * (1.0 - p1[m]) + p2[m] * (1.0 - p2[m]));
    out.cov(m, m_eff + m) = r;
    out.cov(m_eff + m, m) = r;
  }
  return out;
}

namespace {

// log det via Cholesky; returns false when the factorization fails.
bool log_det_llt(const Eigen::MatrixXd& a, double& out) {
  Eigen::LLT<Eigen::MatrixXd> llt(a);
  if (llt.info() != Eigen::Success) return false;
  out = 2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
  return true;
}

double chernoff_with_jitter(const GaussianMoments& a, const GaussianMoments& b,
                            double alpha, double& jitter_used) {
  if (a.mean.size() != b.mean.size() || a.cov.rows() != b.cov.rows())
    throw std::invalid_argument("moment dimensions do not match");
  if (!(alpha >= 0.0 && alpha <= 1.0))
    throw std::invalid_argument("alpha must be in [0, 1]");

  const int n = static_cast<int>(a.mean.size());
  const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(n, n);
  const double jitters[] = {0.0, 1e-12, 1e-10, 1e-8};
  for (double j : jitters) {
    const Eigen::MatrixXd ca = a.cov + j * eye;
    const Eigen::MatrixXd cb = b.cov + j * eye;
    const Eigen::MatrixXd mix = alpha * ca + (1.0 - alpha) * cb;
    double ld_a, ld_b, ld_mix;
    if (!log_det_llt(ca, ld_a) || !log_det_llt(cb, ld_b)) continue;
    Eigen::LLT<Eigen::MatrixXd> llt(mix);
    if (llt.info() != Eigen::Success) continue;
    ld_mix = 2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();

    if (j > jitter_used) jitter_used = j;
    double v = 0.5 * (ld_mix - alpha * ld_a - (1.0 - alpha) * ld_b);
    const double w = alpha * (1.0 - alpha);
    if (w != 0.0) {
      const Eigen::VectorXd d = a.mean - b.mean;
      v += 0.5 * w * d.dot(llt.solve(d));
    }
    return v;
  }
  throw std::runtime_error("covariance is not positive definite");
}

}  // namespace

double chernoff_divergence(const GaussianMoments& a, const GaussianMoments& b,
                           double alpha) {
  double jitter = 0.0;
  return chernoff_with_jitter(a, b, alpha, jitter);
}

ChernoffResult max_chernoff(const GaussianMoments& a, const GaussianMoments& b) {
  ChernoffResult res;
  double best = 0.0;
  double best_alpha = 0.0;
  for (int i = 0; i <= 100; ++i) {
    const double alpha = i / 100.0;
    const double v = chernoff_with_jitter(a, b, alpha, res.jitter);
    if (v > best) {
      best = v;
      best_alpha = alpha;
    }
  }

  double lo = std::max(0.0, best_alpha - 0.01);
  double hi = std::min(1.0, best_alpha + 0.01);
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - gr * (hi - lo);
  double x2 = lo + gr * (hi - lo);
  double f1 = chernoff_with_jitter(a, b, x1, res.jitter);
  double f2 = chernoff_with_jitter(a, b, x2, res.jitter);
  while (hi - lo > 1e-6) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + gr * (hi - lo);
      f2 = chernoff_with_jitter(a, b, x2, res.jitter);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - gr * (hi - lo);
      f1 = chernoff_with_jitter(a, b, x1, res.jitter);
    }
  }
  const double mid = 0.5 * (lo + hi);
  const double fm = chernoff_with_jitter(a, b, mid, res.jitter);
  if (fm > best) {
    best = fm;
    best_alpha = mid;
  }
  if (f1 > best) {
    best = f1;
    best_alpha = x1;
  }
  if (f2 > best) {
    best = f2;
    best_alpha = x2;
  }
  res.value = best;
  res.alpha = best_alpha;
  return res;
}

}  // namespace tbma
