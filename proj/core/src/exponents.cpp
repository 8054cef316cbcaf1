#include "tbma/exponents.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace tbma {

namespace {

std::vector<PairExponent> edge_pairs(const SystemConfig& cfg) {
  std::vector<PairExponent> rows;
  for (int cell = 1; cell <= 2; ++cell) {
    for (int other = 0; other < 2; ++other) {
      const GaussianMoments a = edge_surrogate_moments(cfg, cell, 0, other);
      const GaussianMoments b = edge_surrogate_moments(cfg, cell, 1, other);
      const ChernoffResult c = max_chernoff(a, b);
      PairExponent row;
      row.cell = cell;
      if (cell == 1) {
        row.j0 = 0;
        row.j1 = 1;
        row.k0 = row.k1 = other;
      } else {
        row.k0 = 0;
        row.k1 = 1;
        row.j0 = row.j1 = other;
      }
      row.value = c.value;
      row.alpha = c.alpha;
      row.jitter = c.jitter;
      rows.push_back(row);
    }
  }
  return rows;
}

std::vector<PairExponent> cloud_pairs(const SystemConfig& cfg, double sigma2_q1,
                                      double sigma2_q2) {
  GaussianMoments mom[4];
  for (int j = 0; j < 2; ++j)
    for (int k = 0; k < 2; ++k)
      mom[2 * j + k] = cloud_surrogate_moments(cfg, j, k, sigma2_q1, sigma2_q2);
  std::vector<PairExponent> rows;
  for (int a = 0; a < 4; ++a) {
    for (int b = a + 1; b < 4; ++b) {
      const ChernoffResult c = max_chernoff(mom[a], mom[b]);
      PairExponent row;
      row.cell = 0;
      row.j0 = a / 2;
      row.k0 = a % 2;
      row.j1 = b / 2;
      row.k1 = b % 2;
      row.value = c.value;
      row.alpha = c.alpha;
      row.jitter = c.jitter;
      rows.push_back(row);
    }
  }
  return rows;
}

double min_value(const std::vector<PairExponent>& rows) {
  double best = std::numeric_limits<double>::infinity();
  for (const PairExponent& r : rows) best = std::min(best, r.value);
  return best;
}

}  // namespace

double edge_error_exponent(const SystemConfig& cfg) {
  if (!(cfg.rho > 0.0 && cfg.rho < 1.0))
    throw std::invalid_argument("edge exponent requires 0 < rho < 1");
  return min_value(edge_pairs(cfg));
}

double cloud_error_exponent(const SystemConfig& cfg, double sigma2_q1,
                            double sigma2_q2) {
  return min_value(cloud_pairs(cfg, sigma2_q1, sigma2_q2));
}

double cloud_error_exponent(const SystemConfig& cfg) {
  const QuantizationSpec fh = solve_quantization_variance(cfg);
  return cloud_error_exponent(cfg, fh.sigma2_q_cell1, fh.sigma2_q_cell2);
}

ExponentReport exponent_report(const SystemConfig& cfg,
                               const QuantizationSpec& spec) {
  if (!(cfg.rho > 0.0 && cfg.rho < 1.0))
    throw std::invalid_argument("edge exponent requires 0 < rho < 1");
  ExponentReport rep;
  rep.edge_breakdown = edge_pairs(cfg);
  rep.e_edge = min_value(rep.edge_breakdown);
  rep.sigma2_q1 = spec.sigma2_q_cell1;
  rep.sigma2_q2 = spec.sigma2_q_cell2;
  rep.cloud_breakdown = cloud_pairs(cfg, rep.sigma2_q1, rep.sigma2_q2);
  rep.e_cloud = min_value(rep.cloud_breakdown);
  return rep;
}

ExponentReport exponent_report(const SystemConfig& cfg) {
  return exponent_report(cfg, solve_quantization_variance(cfg));
}

double interference_limit_coefficient(const SystemConfig& cfg) {
  const double m = static_cast<double>(cfg.effective_levels());
  return std::pow(cfg.lambda, 1.0 / (2.0 * m * m));
}

namespace {

// Normalized strong-interference surrogate for joint state (j, k): zero mean,
// diagonal slot variances lambda * p_other + kappa (each cell's samples are
// dominated by the other cell's devices plus forwarding noise).
GaussianMoments limit_moments(const SystemConfig& cfg, int j, int k, double kappa) {
  const int m_eff = cfg.effective_levels();
  const std::vector<double> p1 = observation_pmf(cfg, 1, j);
  const std::vector<double> p2 = observation_pmf(cfg, 2, k);
  GaussianMoments out;
  out.mean = Eigen::VectorXd::Zero(2 * m_eff);
  out.cov = Eigen::MatrixXd::Zero(2 * m_eff, 2 * m_eff);
  for (int m = 0; m < m_eff; ++m) {
    out.cov(m, m) = cfg.lambda * p2[m] + kappa;
    out.cov(m_eff + m, m_eff + m) = cfg.lambda * p1[m] + kappa;
  }
  return out;
}

}  // namespace

InterferenceLimitResult interference_limit_check(
    const SystemConfig& cfg, const std::vector<double>& sigma2_g_grid) {
  InterferenceLimitResult res;
  res.kappa = interference_limit_coefficient(cfg);

  double largest = 0.0;
  for (double s2g : sigma2_g_grid) {
    SystemConfig c = cfg;
    c.sigma2_g = s2g;
    InterferenceLimitPoint pt;
    pt.sigma2_g = s2g;
    pt.sigma2_q = res.kappa * s2g;
    pt.edge_exponent = edge_error_exponent(c);
    pt.cloud_exponent = cloud_error_exponent(c, pt.sigma2_q, pt.sigma2_q);
    res.points.push_back(pt);
    largest = std::max(largest, s2g);
  }

  GaussianMoments mom[4];
  for (int j = 0; j < 2; ++j)
    for (int k = 0; k < 2; ++k)
      mom[2 * j + k] = limit_moments(cfg, j, k, res.kappa);
  double best = std::numeric_limits<double>::infinity();
  for (int a = 0; a < 4; ++a)
    for (int b = a + 1; b < 4; ++b)
      best = std::min(best, max_chernoff(mom[a], mom[b]).value);
  res.limiting_exponent = best;

  res.applicable = largest >= 1e4;
  res.note = res.applicable
                 ? "grid reaches the strong-interference regime"
                 : "inapplicable: cross-cell variance grid stays below 1e4";
  return res;
}

InterferenceLimitResult interference_limit_check(const SystemConfig& cfg) {
  return interference_limit_check(cfg, {1e1, 1e2, 1e3, 1e4, 1e5, 1e6});
}

namespace {

std::string fmt17(double v) {
  char b[48];
  std::snprintf(b, sizeof b, "%.17g", v);
  return b;
}

void pair_row(std::ostream& out, const char* scope, const PairExponent& p) {
  out << scope << ',';
  if (p.cell != 0) out << p.cell;
  out << ',' << p.j0 << ',' << p.k0 << ',' << p.j1 << ',' << p.k1 << ','
      << fmt17(p.value) << ',' << fmt17(p.alpha) << ',' << fmt17(p.jitter)
      << ",,,,\n";
}

}  // namespace

void write_exponent_report_csv(std::ostream& out, const ExponentReport& rep) {
  out << "scope,cell,j0,k0,j1,k1,exponent,alpha,jitter,e_edge,e_cloud,"
         "sigma2_q1,sigma2_q2\n";
  out << "summary,,,,,,,,," << fmt17(rep.e_edge) << ',' << fmt17(rep.e_cloud)
      << ',' << fmt17(rep.sigma2_q1) << ',' << fmt17(rep.sigma2_q2) << '\n';
  for (const PairExponent& p : rep.edge_breakdown) pair_row(out, "edge", p);
  for (const PairExponent& p : rep.cloud_breakdown) pair_row(out, "cloud", p);
}

void write_exponent_report_csv(const std::string& path,
                               const ExponentReport& rep) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write csv file: " + path);
  write_exponent_report_csv(out, rep);
  if (!out) throw std::runtime_error("failed writing csv file: " + path);
}

}  // namespace tbma
