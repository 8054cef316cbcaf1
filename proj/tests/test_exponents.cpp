#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "doctest.h"
#include "tbma/config.hpp"
#include "tbma/exponents.hpp"
#include "tbma/fronthaul.hpp"

using namespace tbma;

TEST_CASE("exponents ignore the state prior entirely") {
  SystemConfig a;
  a.rho = 0.2;
  SystemConfig b = a;
  b.rho = 0.5;
  SystemConfig c = a;
  c.rho = 0.85;
  const ExponentReport ra = exponent_report(a);
  const ExponentReport rb = exponent_report(b);
  const ExponentReport rc = exponent_report(c);
  CHECK(ra.e_edge == rb.e_edge);
  CHECK(rb.e_edge == rc.e_edge);
  CHECK(ra.e_cloud == rb.e_cloud);
  CHECK(rb.e_cloud == rc.e_cloud);
}

TEST_CASE("degenerate state priors are rejected") {
  SystemConfig cfg;
  for (double rho : {0.0, 1.0}) {
    cfg.rho = rho;
    CHECK_THROWS_WITH_AS(edge_error_exponent(cfg),
                         "edge exponent requires 0 < rho < 1",
                         std::invalid_argument);
    CHECK_THROWS_AS(exponent_report(cfg), std::invalid_argument);
  }
}

TEST_CASE("mirrored tables with matching channels stall the joint decision") {
  SystemConfig cfg;  // cross channel is a copy of the in-cell channel
  const ExponentReport r = exponent_report(cfg);
  CHECK(r.e_cloud < 1e-10);  // swapped-state pair is indistinguishable
  CHECK(r.e_edge > 0.2);
  // The vanishing comparison is exactly the swapped pair.
  const PairExponent* worst = nullptr;
  for (const PairExponent& p : r.cloud_breakdown)
    if (!worst || p.value < worst->value) worst = &p;
  REQUIRE(worst != nullptr);
  CHECK(worst->j0 + worst->k0 == 1);
  CHECK(worst->j1 + worst->k1 == 1);
}

TEST_CASE("stronger interference erodes the per-cell decision") {
  SystemConfig cfg;
  cfg.mu_g = 0.0;
  double prev = 1e300;
  double first = 0.0;
  for (double s2g : {1.0, 10.0, 100.0, 1000.0}) {
    cfg.sigma2_g = s2g;
    const double e = edge_error_exponent(cfg);
    CHECK(e < prev);
    if (s2g == 1.0) first = e;
    prev = e;
  }
  cfg.sigma2_g = 1e4;
  CHECK(edge_error_exponent(cfg) < 0.01 * first);
}

TEST_CASE("the central decision beats the cell under heavy interference") {
  SystemConfig cfg;
  cfg.mu_g = 0.0;
  cfg.sigma2_g = 100.0;
  cfg.fronthaul_capacity = 50.0;
  const ExponentReport r = exponent_report(cfg);
  CHECK(r.e_cloud > r.e_edge);
  CHECK(r.e_edge < 0.01);
}

TEST_CASE("capacity moves the central exponent across the cell baseline") {
  SystemConfig cfg;
  cfg.mu_g = 0.0;
  cfg.sigma2_g = 1.0;
  const double edge = edge_error_exponent(cfg);
  double prev = -1.0;
  for (double c : {0.25, 0.5, 1.0, 2.0, 5.0, 10.0, 50.0}) {
    cfg.fronthaul_capacity = c;
    const double cloud = cloud_error_exponent(cfg);
    CHECK(cloud >= prev);
    prev = cloud;
    if (c <= 0.5) CHECK(cloud < edge);   // starved link: keep it local
    if (c >= 5.0) CHECK(cloud > edge);   // ample link: centralize
  }
}

TEST_CASE("explicit forwarding noise matches the solved balance") {
  SystemConfig cfg;
  cfg.mu_g = 0.0;
  const QuantizationSpec spec = solve_quantization_variance(cfg);
  CHECK(cloud_error_exponent(cfg, spec.sigma2_q_cell1, spec.sigma2_q_cell2) ==
        cloud_error_exponent(cfg));
}

TEST_CASE("reported minima agree with their breakdowns") {
  SystemConfig cfg;
  cfg.mu_g = 0.5;
  cfg.sigma2_g = 2.0;
  const ExponentReport r = exponent_report(cfg);
  REQUIRE(r.edge_breakdown.size() == 4);
  REQUIRE(r.cloud_breakdown.size() == 6);
  double emin = 1e300, cmin = 1e300;
  for (const PairExponent& p : r.edge_breakdown) {
    emin = std::min(emin, p.value);
    CHECK((p.cell == 1 || p.cell == 2));
    CHECK(p.alpha > 0.0);
    CHECK(p.alpha < 1.0);
  }
  for (const PairExponent& p : r.cloud_breakdown) {
    cmin = std::min(cmin, p.value);
    CHECK(p.cell == 0);
  }
  CHECK(r.e_edge == emin);
  CHECK(r.e_cloud == cmin);
  const QuantizationSpec spec = solve_quantization_variance(cfg);
  CHECK(r.sigma2_q1 == spec.sigma2_q_cell1);
  CHECK(r.sigma2_q2 == spec.sigma2_q_cell2);
}

TEST_CASE("the strong-interference sweep approaches its closed-form limit") {
  SystemConfig cfg;
  cfg.mu_g = 0.0;
  const InterferenceLimitResult lim = interference_limit_check(cfg);
  CHECK(lim.kappa == doctest::Approx(std::pow(4.0, 1.0 / 32.0)).epsilon(1e-14));
  CHECK(lim.applicable);
  CHECK(lim.note == "grid reaches the strong-interference regime");
  REQUIRE(lim.points.size() == 6);
  CHECK(lim.limiting_exponent > 0.0);

  const InterferenceLimitPoint& last = lim.points.back();
  CHECK(last.sigma2_g == 1e6);
  CHECK(last.sigma2_q == doctest::Approx(lim.kappa * 1e6).epsilon(1e-14));
  // Central exponent plateaus at the limit; per-cell exponent vanishes.
  CHECK(std::abs(last.cloud_exponent - lim.limiting_exponent) <=
        0.01 * lim.limiting_exponent);
  CHECK(last.edge_exponent < 1e-5);
  double prev_gap = 1e300;
  for (const InterferenceLimitPoint& p : lim.points) {
    const double gap = std::abs(p.cloud_exponent - lim.limiting_exponent);
    CHECK(gap <= prev_gap + 1e-12);
    prev_gap = gap;
  }
}

TEST_CASE("a small sweep grid is flagged as inconclusive") {
  SystemConfig cfg;
  cfg.mu_g = 0.0;
  const InterferenceLimitResult lim = interference_limit_check(cfg, {1.0});
  CHECK_FALSE(lim.applicable);
  CHECK(lim.note.find("inapplicable") != std::string::npos);
  REQUIRE(lim.points.size() == 1);
}

TEST_CASE("report rows serialize with a stable schema") {
  SystemConfig cfg;
  const ExponentReport r = exponent_report(cfg);
  std::ostringstream out;
  write_exponent_report_csv(out, r);
  const std::string text = out.str();
  std::istringstream in(text);
  std::string line;
  REQUIRE(std::getline(in, line));
  CHECK(line ==
        "scope,cell,j0,k0,j1,k1,exponent,alpha,jitter,e_edge,e_cloud,"
        "sigma2_q1,sigma2_q2");
  REQUIRE(std::getline(in, line));
  CHECK(line.rfind("summary,", 0) == 0);
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == 10);  // four cell comparisons plus six joint pairs
  CHECK(text.back() == '\n');
}
