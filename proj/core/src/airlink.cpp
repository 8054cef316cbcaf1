#include "tbma/airlink.hpp"

#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace tbma {

std::pair<ReceivedRow, ReceivedRow> simulate_interval(const SystemConfig& cfg,
                                                      QoiPair q, Rng& rng,
                                                      IntervalCounts* counts) {
  const int m_eff = cfg.effective_levels();
  const bool cross = cfg.reuse_mode == ReuseMode::NonOrthogonal;
  const double w0 = cfg.noise_floor();
  const std::vector<double> p1 = observation_pmf(cfg, 1, q.theta1);
  const std::vector<double> p2 = observation_pmf(cfg, 2, q.theta2);

  // Per-level device counts via Poisson thinning of the per-cell population.
  std::vector<long long> n1(m_eff), n2(m_eff);
  long long tot1 = 0, tot2 = 0;
  for (int m = 0; m < m_eff; ++m) tot1 += n1[m] = rng.poisson(cfg.lambda * p1[m]);
  for (int m = 0; m < m_eff; ++m) tot2 += n2[m] = rng.poisson(cfg.lambda * p2[m]);
  if (counts) *counts = {tot1, tot2};

  ReceivedRow y1(m_eff, {0.0, 0.0}), y2(m_eff, {0.0, 0.0});
  for (int m = 0; m < m_eff; ++m) {
    for (long long i = 0; i < n1[m]; ++i)
      y1[m] += rng.complex_gaussian(cfg.mu_h, cfg.sigma2_h);
    if (cross)
      for (long long i = 0; i < n2[m]; ++i)
        y1[m] += rng.complex_gaussian(cfg.mu_g, cfg.sigma2_g);
    y1[m] += rng.complex_gaussian(0.0, w0);
  }
  for (int m = 0; m < m_eff; ++m) {
    for (long long i = 0; i < n2[m]; ++i)
      y2[m] += rng.complex_gaussian(cfg.mu_h, cfg.sigma2_h);
    if (cross)
      for (long long i = 0; i < n1[m]; ++i)
        y2[m] += rng.complex_gaussian(cfg.mu_g, cfg.sigma2_g);
    y2[m] += rng.complex_gaussian(0.0, w0);
  }
  return {std::move(y1), std::move(y2)};
}

std::pair<ReceivedRow, ReceivedRow> simulate_interval(const SystemConfig& cfg,
                                                      QoiPair q, Rng& rng) {
  return simulate_interval(cfg, q, rng, nullptr);
}

TrialObservation simulate_trial(const SystemConfig& cfg, QoiPair q, Rng& rng) {
  TrialObservation out;
  out.cell1.reserve(cfg.l_intervals);
  out.cell2.reserve(cfg.l_intervals);
  for (int l = 0; l < cfg.l_intervals; ++l) {
    auto [y1, y2] = simulate_interval(cfg, q, rng, nullptr);
    out.cell1.push_back(std::move(y1));
    out.cell2.push_back(std::move(y2));
  }
  return out;
}

CollectionTrace simulate_trace(const SystemConfig& cfg, QoiPair q, Rng& rng) {
  CollectionTrace tr;
  tr.qoi = q;
  tr.counts.resize(cfg.l_intervals);
  tr.received.cell1.reserve(cfg.l_intervals);
  tr.received.cell2.reserve(cfg.l_intervals);
  for (int l = 0; l < cfg.l_intervals; ++l) {
    auto [y1, y2] = simulate_interval(cfg, q, rng, &tr.counts[l]);
    tr.received.cell1.push_back(std::move(y1));
    tr.received.cell2.push_back(std::move(y2));
  }
  return tr;
}

CellObservation add_forwarding_noise(const CellObservation& obs, double sigma2_q,
                                     Rng& rng) {
  CellObservation out = obs;
  for (auto& row : out)
    for (auto& y : row) y += rng.complex_gaussian(0.0, sigma2_q);
  return out;
}

void write_trace_csv(std::ostream& out, const std::vector<CollectionTrace>& traces) {
  if (traces.empty()) {
    out << "trial,interval,cell,theta1,theta2,n1,n2\n";
    return;
  }
  const size_t m_eff = traces.front().received.cell1.front().size();
  out << "trial,interval,cell";
  for (size_t m = 1; m <= m_eff; ++m) out << ",re_" << m;
  for (size_t m = 1; m <= m_eff; ++m) out << ",im_" << m;
  out << ",theta1,theta2,n1,n2\n";
  out << std::setprecision(17);
  for (size_t t = 0; t < traces.size(); ++t) {
    const CollectionTrace& tr = traces[t];
    for (size_t l = 0; l < tr.counts.size(); ++l) {
      for (int cell = 1; cell <= 2; ++cell) {
        const ReceivedRow& row =
            cell == 1 ? tr.received.cell1[l] : tr.received.cell2[l];
        out << t << ',' << l + 1 << ',' << cell;
        for (const auto& y : row) out << ',' << y.real();
        for (const auto& y : row) out << ',' << y.imag();
        out << ',' << tr.qoi.theta1 << ',' << tr.qoi.theta2 << ','
            << tr.counts[l].cell1 << ',' << tr.counts[l].cell2 << '\n';
      }
    }
  }
}

void write_trace_csv(const std::string& path,
                     const std::vector<CollectionTrace>& traces) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write trace file: " + path);
  write_trace_csv(out, traces);
  if (!out) throw std::runtime_error("failed writing trace file: " + path);
}

}  // namespace tbma
