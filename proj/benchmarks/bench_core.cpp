#include <benchmark/benchmark.h>

#include "tbma/airlink.hpp"
#include "tbma/config.hpp"
#include "tbma/detectors.hpp"
#include "tbma/exponents.hpp"
#include "tbma/fronthaul.hpp"
#include "tbma/gaussian.hpp"
#include "tbma/learned.hpp"
#include "tbma/likelihood.hpp"
#include "tbma/mlp.hpp"

namespace {

tbma::SystemConfig default_cfg() {
  tbma::SystemConfig cfg;
  return tbma::validate_config(cfg);
}

void bm_interval_log_density(benchmark::State& state) {
  const tbma::SystemConfig cfg = default_cfg();
  const tbma::IntervalLikelihood lik(cfg, 1, 0, 0);
  tbma::Rng rng(7);
  const tbma::QoiPair q{0, 0};
  const auto row = tbma::simulate_interval(cfg, q, rng).first;
  for (auto _ : state) benchmark::DoNotOptimize(lik.log_density(row));
}
BENCHMARK(bm_interval_log_density);

void bm_edge_detect(benchmark::State& state) {
  const tbma::SystemConfig cfg = default_cfg();
  const tbma::EdgeDetector det(cfg, 1);
  tbma::Rng rng(7);
  const auto obs = tbma::simulate_trial(cfg, {0, 1}, rng);
  for (auto _ : state) benchmark::DoNotOptimize(det.detect(obs.cell1));
}
BENCHMARK(bm_edge_detect);

void bm_cloud_detect(benchmark::State& state) {
  const tbma::SystemConfig cfg = default_cfg();
  const tbma::QuantizationSpec spec = tbma::solve_quantization_variance(cfg);
  const tbma::CloudDetector det(cfg, spec.sigma2_q_cell1, spec.sigma2_q_cell2);
  tbma::Rng rng(7);
  auto obs = tbma::simulate_trial(cfg, {0, 1}, rng);
  obs.cell1 = tbma::add_forwarding_noise(obs.cell1, spec.sigma2_q_cell1, rng);
  obs.cell2 = tbma::add_forwarding_noise(obs.cell2, spec.sigma2_q_cell2, rng);
  for (auto _ : state) benchmark::DoNotOptimize(det.detect(obs));
}
BENCHMARK(bm_cloud_detect);

void bm_simulate_trial(benchmark::State& state) {
  const tbma::SystemConfig cfg = default_cfg();
  tbma::Rng rng(7);
  for (auto _ : state)
    benchmark::DoNotOptimize(tbma::simulate_trial(cfg, {0, 1}, rng));
}
BENCHMARK(bm_simulate_trial);

void bm_chernoff_max(benchmark::State& state) {
  const tbma::SystemConfig cfg = default_cfg();
  const tbma::QuantizationSpec spec = tbma::solve_quantization_variance(cfg);
  const auto a = tbma::cloud_surrogate_moments(cfg, 0, 0, spec.sigma2_q_cell1,
                                               spec.sigma2_q_cell2);
  const auto b = tbma::cloud_surrogate_moments(cfg, 1, 0, spec.sigma2_q_cell1,
                                               spec.sigma2_q_cell2);
  for (auto _ : state) benchmark::DoNotOptimize(tbma::max_chernoff(a, b));
}
BENCHMARK(bm_chernoff_max);

void bm_quantization_solve(benchmark::State& state) {
  const tbma::SystemConfig cfg = default_cfg();
  for (auto _ : state)
    benchmark::DoNotOptimize(tbma::solve_quantization_variance(cfg));
}
BENCHMARK(bm_quantization_solve);

void bm_train_epoch(benchmark::State& state) {
  tbma::SystemConfig cfg = default_cfg();
  const tbma::Dataset ds =
      tbma::generate_dataset(cfg, 1000, tbma::DatasetTarget::EdgeCell1, nullptr, 7);
  tbma::Rng init = tbma::Rng::stream(7, tbma::stream_tag::kInit, 0);
  tbma::Mlp mlp({static_cast<int>(ds.inputs.cols()), 32, 32, 1}, init);
  for (auto _ : state)
    benchmark::DoNotOptimize(mlp.train_epoch(ds.inputs, ds.labels, 0.01));
}
BENCHMARK(bm_train_epoch);

}  // namespace

BENCHMARK_MAIN();
