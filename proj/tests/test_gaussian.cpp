#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "tbma/config.hpp"
#include "tbma/gaussian.hpp"

using namespace tbma;

namespace {

GaussianMoments scalar(double mean, double var) {
  GaussianMoments g;
  g.mean = Eigen::VectorXd::Constant(1, mean);
  g.cov = Eigen::MatrixXd::Constant(1, 1, var);
  return g;
}

}  // namespace

TEST_CASE("cell moments track load means and variances per slot") {
  SystemConfig cfg;
  const double w0 = cfg.noise_floor();
  const GaussianMoments g = edge_surrogate_moments(cfg, 1, 0, 0);
  REQUIRE(g.mean.size() == 4);
  const double means[4] = {3.2, 2.4, 1.6, 0.8};
  for (int m = 0; m < 4; ++m) {
    CHECK(g.mean(m) == doctest::Approx(means[m]).epsilon(1e-14));
    CHECK(g.cov(m, m) == doctest::Approx(means[m] + w0).epsilon(1e-13));
    for (int n = 0; n < 4; ++n)
      if (n != m) CHECK(g.cov(m, n) == 0.0);
  }
  // Distortion loads the diagonal only.
  const GaussianMoments gq = edge_surrogate_moments(cfg, 1, 0, 0, 0.25);
  for (int m = 0; m < 4; ++m)
    CHECK(gq.cov(m, m) == doctest::Approx(g.cov(m, m) + 0.25).epsilon(1e-14));

  // Opposite states overlay one table with the reverse of the other.
  const GaussianMoments g01 = edge_surrogate_moments(cfg, 1, 0, 1);
  CHECK(g01.mean(0) == doctest::Approx(4.0 * (0.4 + 0.1)).epsilon(1e-14));
  CHECK(g01.mean(3) == doctest::Approx(4.0 * (0.1 + 0.4)).epsilon(1e-14));
}

TEST_CASE("identical cell tables make the two cells interchangeable") {
  SystemConfig cfg;
  for (int own = 0; own < 2; ++own)
    for (int other = 0; other < 2; ++other) {
      const GaussianMoments a = edge_surrogate_moments(cfg, 1, own, other);
      const GaussianMoments b = edge_surrogate_moments(cfg, 2, own, other);
      CHECK((a.mean - b.mean).cwiseAbs().maxCoeff() == 0.0);
      CHECK((a.cov - b.cov).cwiseAbs().maxCoeff() == 0.0);
    }
}

TEST_CASE("stacked moments couple matching slots of the two cells") {
  SystemConfig cfg;
  const GaussianMoments g = cloud_surrogate_moments(cfg, 0, 0, 0.0, 0.0);
  REQUIRE(g.mean.size() == 8);
  // Shared transmissions correlate slot m of cell 1 with slot m of cell 2:
  // lambda * mu_h * mu_g * (p1 (1 - p1) + p2 (1 - p2)).
  CHECK(g.cov(0, 4) == doctest::Approx(4.0 * (0.4 * 0.6 + 0.4 * 0.6)).epsilon(1e-13));
  CHECK(g.cov(4, 0) == g.cov(0, 4));
  CHECK(g.cov(1, 5) == doctest::Approx(4.0 * 2.0 * (0.3 * 0.7)).epsilon(1e-13));
  CHECK(g.cov(0, 5) == 0.0);  // different slots stay uncorrelated

  // The second block swaps the state roles of the two cells.
  const GaussianMoments e2 = edge_surrogate_moments(cfg, 2, 0, 0);
  for (int m = 0; m < 4; ++m) {
    CHECK(g.mean(4 + m) == e2.mean(m));
    CHECK(g.cov(4 + m, 4 + m) == e2.cov(m, m));
  }

  // Forwarding noise loads each cell's own block diagonal.
  const GaussianMoments gq = cloud_surrogate_moments(cfg, 0, 0, 0.5, 0.125);
  for (int m = 0; m < 4; ++m) {
    CHECK(gq.cov(m, m) == doctest::Approx(g.cov(m, m) + 0.5).epsilon(1e-13));
    CHECK(gq.cov(4 + m, 4 + m) ==
          doctest::Approx(g.cov(4 + m, 4 + m) + 0.125).epsilon(1e-13));
    CHECK(gq.cov(m, 4 + m) == g.cov(m, 4 + m));
  }
}

TEST_CASE("a zero-mean cross channel removes the coupling") {
  SystemConfig cfg;
  cfg.mu_g = 0.0;
  const GaussianMoments g = cloud_surrogate_moments(cfg, 0, 1, 0.0, 0.0);
  for (int m = 0; m < 4; ++m) CHECK(g.cov(m, 4 + m) == 0.0);

  cfg.sigma2_g = 0.0;  // no cross power at all: the other state is irrelevant
  const GaussianMoments a = edge_surrogate_moments(cfg, 1, 0, 0);
  const GaussianMoments b = edge_surrogate_moments(cfg, 1, 0, 1);
  CHECK((a.mean - b.mean).cwiseAbs().maxCoeff() == 0.0);
  CHECK((a.cov - b.cov).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("divergence endpoints and coincident inputs are exactly zero") {
  SystemConfig cfg;
  const GaussianMoments a = edge_surrogate_moments(cfg, 1, 0, 0);
  const GaussianMoments b = edge_surrogate_moments(cfg, 1, 1, 0);
  CHECK(chernoff_divergence(a, b, 0.0) == 0.0);
  CHECK(chernoff_divergence(a, b, 1.0) == 0.0);
  CHECK(max_chernoff(a, a).value == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("scalar divergences match closed forms") {
  const GaussianMoments a = scalar(0.0, 1.0);
  const GaussianMoments b = scalar(1.0, 1.0);
  CHECK(chernoff_divergence(a, b, 0.5) == doctest::Approx(0.125).epsilon(1e-12));

  const GaussianMoments c = scalar(0.0, 2.0);
  const double expect = 0.5 * std::log(1.5 / std::sqrt(2.0));
  CHECK(chernoff_divergence(a, c, 0.5) == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("swapping the arguments mirrors the optimal weight") {
  SystemConfig cfg;
  const GaussianMoments a = edge_surrogate_moments(cfg, 1, 0, 0);
  const GaussianMoments b = edge_surrogate_moments(cfg, 1, 1, 1);
  const ChernoffResult ab = max_chernoff(a, b);
  const ChernoffResult ba = max_chernoff(b, a);
  CHECK(ab.value == doctest::Approx(ba.value).epsilon(1e-9));
  CHECK(ab.alpha == doctest::Approx(1.0 - ba.alpha).epsilon(1e-4));
}

TEST_CASE("refinement does not fall below the coarse grid") {
  SystemConfig cfg;
  const GaussianMoments a = edge_surrogate_moments(cfg, 1, 0, 0);
  const GaussianMoments b = edge_surrogate_moments(cfg, 1, 1, 0);
  const ChernoffResult r = max_chernoff(a, b);
  double grid_best = 0.0;
  for (int i = 0; i <= 100; ++i)
    grid_best = std::max(grid_best, chernoff_divergence(a, b, i / 100.0));
  CHECK(r.value >= grid_best - 1e-12);
  CHECK(r.value == doctest::Approx(grid_best).epsilon(1e-4));
  CHECK(r.jitter == 0.0);
}

TEST_CASE("shape and weight errors are rejected") {
  const GaussianMoments a = scalar(0.0, 1.0);
  GaussianMoments wide;
  wide.mean = Eigen::VectorXd::Zero(2);
  wide.cov = Eigen::MatrixXd::Identity(2, 2);
  CHECK_THROWS_AS(chernoff_divergence(a, wide, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(chernoff_divergence(a, a, -0.1), std::invalid_argument);
  CHECK_THROWS_AS(chernoff_divergence(a, a, 1.1), std::invalid_argument);
}

TEST_CASE("hopelessly indefinite covariances are reported") {
  GaussianMoments bad;
  bad.mean = Eigen::VectorXd::Zero(2);
  bad.cov = -Eigen::MatrixXd::Identity(2, 2);
  const GaussianMoments ok = scalar(0.0, 1.0);
  GaussianMoments ok2;
  ok2.mean = Eigen::VectorXd::Zero(2);
  ok2.cov = Eigen::MatrixXd::Identity(2, 2);
  CHECK_THROWS_AS(chernoff_divergence(bad, ok2, 0.5), std::runtime_error);
}
