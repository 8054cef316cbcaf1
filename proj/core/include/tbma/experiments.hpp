#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "tbma/config.hpp"
#include "tbma/learned.hpp"
#include "tbma/mlp.hpp"

namespace tbma {

struct WilsonInterval {
  double lo = 0.0;
  double hi = 1.0;
};

// 95% score interval for a binomial proportion; always brackets errors/trials.
WilsonInterval wilson_interval(long long errors, long long trials);

enum class DetectorKind { OptimalEdge, OptimalCloud, LearnedEdge, LearnedCloud };

std::string detector_kind_name(DetectorKind kind);

// Which decision rules to score on each simulated trial. Scored rules share
// the trial draws, so their estimates are directly comparable. Learned edge
// evaluation needs both per-cell models.
struct EvalRequest {
  bool optimal_edge = false;
  bool optimal_cloud = false;
  const Mlp* learned_edge1 = nullptr;
  const Mlp* learned_edge2 = nullptr;
  const Mlp* learned_cloud = nullptr;
};

struct EvalCounts {
  long long trials = 0;
  long long optimal_edge_errors = 0;
  long long optimal_cloud_errors = 0;
  long long learned_edge_errors = 0;
  long long learned_cloud_errors = 0;
  double sigma2_q1 = 0.0;  // filled when any central rule ran
  double sigma2_q2 = 0.0;
  bool used_quantization = false;
};

// Monte Carlo joint-error counting: a trial is an error for a rule when any
// cell's state comes out wrong. Trials use one derived stream each, so the
// counts do not depend on the worker count, and a rule's counts do not depend
// on which other rules were scored alongside it.
EvalCounts evaluate_joint_errors(const SystemConfig& cfg, const EvalRequest& req,
                                 long long n_trials, std::uint64_t seed,
                                 int workers = 1);

struct ExperimentRecord {
  std::string sweep;
  std::string param;
  double value = 0.0;
  std::string detector;
  std::optional<double> pe;
  std::optional<double> ci_lo;
  std::optional<double> ci_hi;
  std::optional<long long> trials;
  std::optional<double> e_edge;
  std::optional<double> e_cloud;
  std::optional<double> sigma2_q1;
  std::optional<double> sigma2_q2;
  std::uint64_t seed = 0;
};

// One-point estimate for a single decision rule. Learned kinds take their
// models through `models`.
struct LearnedModels {
  const Mlp* edge1 = nullptr;
  const Mlp* edge2 = nullptr;
  const Mlp* cloud = nullptr;
};

ExperimentRecord estimate_pe(const SystemConfig& cfg, DetectorKind kind,
                             long long n_trials, std::uint64_t seed,
                             int workers = 1,
                             const LearnedModels* models = nullptr);

// Header: sweep,param,value,detector,pe,ci_lo,ci_hi,trials,e_edge,e_cloud,
// sigma2_q1,sigma2_q2,seed. Floats at 17 significant digits, absent fields
// empty, fields quoted when they need it.
void write_records_csv(std::ostream& out,
                       const std::vector<ExperimentRecord>& records);
void write_records_csv(const std::string& path,
                       const std::vector<ExperimentRecord>& records);

struct FigureOptions {
  long long trials = 100000;
  std::uint64_t seed = 1;
  int workers = 1;
  int epochs = 2000;  // training length for learned-detector sweeps
};

std::vector<std::string> figure_names();

// Built-in sweep plans named after the result they reproduce:
//   fig3  exponents vs cross-cell variance at two capacities (zero cross mean)
//   fig4  exponents vs capacity at two SNRs (zero cross mean)
//   fig5  error probability vs cross-cell variance, both reuse modes
//   fig6  error probability vs capacity
//   fig7  error probability vs state correlation
//   fig7b error probability vs SNR at two cross-cell variances
//   fig8  learned vs optimal error probability vs training-set size
std::vector<ExperimentRecord> run_figure(const std::string& name,
                                         const SystemConfig& base,
                                         const FigureOptions& opt);

}  // namespace tbma
