#include "tbma/experiments.hpp"

#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <memory>
#include <stdexcept>
#include <thread>

#include "tbma/airlink.hpp"
#include "tbma/detectors.hpp"
#include "tbma/exponents.hpp"
#include "tbma/fronthaul.hpp"

namespace tbma {

WilsonInterval wilson_interval(long long errors, long long trials) {
  if (trials < 1) throw std::invalid_argument("trial count must be positive");
  if (errors < 0 || errors > trials)
    throw std::invalid_argument("error count out of range");
  const double z = 1.959963984540054;
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(errors) / n;
  const double denom = 1.0 + z * z / n;
  const double center = (p + z * z / (2.0 * n)) / denom;
  const double half =
      (z / denom) * std::sqrt(p * (1.0 - p) / n + z * z / (4.0 * n * n));
  WilsonInterval w;
  // The exact endpoints are 0 and 1 at the boundary counts; rounding in the
  // square root can land a hair inside, so pin them.
  w.lo = errors == 0 ? 0.0 : std::max(0.0, center - half);
  w.hi = errors == trials ? 1.0 : std::min(1.0, center + half);
  return w;
}

std::string detector_kind_name(DetectorKind kind) {
  switch (kind) {
    case DetectorKind::OptimalEdge:
      return "edge";
    case DetectorKind::OptimalCloud:
      return "cloud";
    case DetectorKind::LearnedEdge:
      return "learned_edge";
    case DetectorKind::LearnedCloud:
      return "learned_cloud";
  }
  return "unknown";
}

EvalCounts evaluate_joint_errors(const SystemConfig& cfg, const EvalRequest& req,
                                 long long n_trials, std::uint64_t seed,
                                 int workers) {
  if (n_trials < 1) throw std::invalid_argument("trial count must be positive");
  if ((req.learned_edge1 == nullptr) != (req.learned_edge2 == nullptr))
    throw std::invalid_argument("learned edge evaluation needs both cell models");

  const bool learned_edge = req.learned_edge1 != nullptr;
  const bool learned_cloud = req.learned_cloud != nullptr;
  const bool quantize = req.optimal_cloud || learned_cloud;

  EvalCounts total;
  if (quantize) {
    const QuantizationSpec spec = solve_quantization_variance(cfg);
    total.sigma2_q1 = spec.sigma2_q_cell1;
    total.sigma2_q2 = spec.sigma2_q_cell2;
    total.used_quantization = true;
  }

  std::unique_ptr<EdgeDetector> e1, e2;
  std::unique_ptr<CloudDetector> cd;
  if (req.optimal_edge) {
    e1 = std::make_unique<EdgeDetector>(cfg, 1);
    e2 = std::make_unique<EdgeDetector>(cfg, 2);
  }
  if (req.optimal_cloud)
    cd = std::make_unique<CloudDetector>(cfg, total.sigma2_q1, total.sigma2_q2);

  const int nw = std::max(1, workers);
  std::vector<EvalCounts> parts(nw);
  std::vector<std::exception_ptr> fails(nw);

  auto run_worker = [&](int w) {
    EvalCounts& c = parts[w];
    try {
      for (long long t = w; t < n_trials; t += nw) {
        Rng trng = Rng::stream(seed, stream_tag::kTrial,
                               static_cast<std::uint64_t>(t));
        const QoiPair q = sample_qoi_pair(cfg, trng);
        const TrialObservation obs = simulate_trial(cfg, q, trng);
        TrialObservation qobs;
        if (quantize) {
          Rng qrng = Rng::stream(seed, stream_tag::kQuantize,
                                 static_cast<std::uint64_t>(t));
          qobs.cell1 = add_forwarding_noise(obs.cell1, total.sigma2_q1, qrng);
          qobs.cell2 = add_forwarding_noise(obs.cell2, total.sigma2_q2, qrng);
        }
        ++c.trials;
        if (req.optimal_edge) {
          if (e1->detect(obs.cell1) != q.theta1 ||
              e2->detect(obs.cell2) != q.theta2)
            ++c.optimal_edge_errors;
        }
        if (req.optimal_cloud) {
          const JointHypothesisIndex d = cd->detect(qobs);
          if (d.j != q.theta1 || d.k != q.theta2) ++c.optimal_cloud_errors;
        }
        if (learned_edge) {
          Eigen::MatrixXd x1(1, req.learned_edge1->input_dim());
          Eigen::MatrixXd x2(1, req.learned_edge2->input_dim());
          x1.row(0) = flatten_features(cfg, obs, DatasetTarget::EdgeCell1);
          x2.row(0) = flatten_features(cfg, obs, DatasetTarget::EdgeCell2);
          if (req.learned_edge1->predict(x1)(0) != q.theta1 ||
              req.learned_edge2->predict(x2)(0) != q.theta2)
            ++c.learned_edge_errors;
        }
        if (learned_cloud) {
          Eigen::MatrixXd xc(1, req.learned_cloud->input_dim());
          xc.row(0) = flatten_features(cfg, qobs, DatasetTarget::Cloud);
          const QoiPair d =
              decode_joint_label(req.learned_cloud->predict(xc)(0));
          if (d.theta1 != q.theta1 || d.theta2 != q.theta2)
            ++c.learned_cloud_errors;
        }
      }
    } catch (...) {
      fails[w] = std::current_exception();
    }
  };

  if (nw == 1) {
    run_worker(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(nw);
    for (int w = 0; w < nw; ++w) pool.emplace_back(run_worker, w);
    for (std::thread& th : pool) th.join();
  }
  for (const std::exception_ptr& e : fails)
    if (e) std::rethrow_exception(e);

  for (const EvalCounts& c : parts) {
    total.trials += c.trials;
    total.optimal_edge_errors += c.optimal_edge_errors;
    total.optimal_cloud_errors += c.optimal_cloud_errors;
    total.learned_edge_errors += c.learned_edge_errors;
    total.learned_cloud_errors += c.learned_cloud_errors;
  }
  return total;
}

namespace {

ExperimentRecord base_record(const std::string& sweep, const std::string& param,
                             double value, const std::string& detector,
                             std::uint64_t seed) {
  ExperimentRecord r;
  r.sweep = sweep;
  r.param = param;
  r.value = value;
  r.detector = detector;
  r.seed = seed;
  return r;
}

void fill_pe(ExperimentRecord& r, long long errors, long long trials) {
  r.trials = trials;
  r.pe = static_cast<double>(errors) / static_cast<double>(trials);
  const WilsonInterval w = wilson_interval(errors, trials);
  r.ci_lo = w.lo;
  r.ci_hi = w.hi;
}

std::string fmt17(double v) {
  char b[48];
  std::snprintf(b, sizeof b, "%.17g", v);
  return b;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string fmt_short(double v) {
  char b[48];
  std::snprintf(b, sizeof b, "%g", v);
  return b;
}

// Emits the edge row and the cloud row for one sweep point, scored on shared
// trials. Exponent columns are filled when they are computable at the point.
void optimal_point_rows(std::vector<ExperimentRecord>& out,
                        const std::string& sweep, const std::string& param,
                        double value, const std::string& suffix,
                        const SystemConfig& cfg, const FigureOptions& opt) {
  EvalRequest req;
  req.optimal_edge = true;
  req.optimal_cloud = true;
  const EvalCounts c =
      evaluate_joint_errors(cfg, req, opt.trials, opt.seed, opt.workers);

  ExperimentRecord edge =
      base_record(sweep, param, value, "edge" + suffix, opt.seed);
  fill_pe(edge, c.optimal_edge_errors, c.trials);
  try {
    edge.e_edge = edge_error_exponent(cfg);
  } catch (const std::exception&) {
  }
  out.push_back(std::move(edge));

  ExperimentRecord cloud =
      base_record(sweep, param, value, "cloud" + suffix, opt.seed);
  fill_pe(cloud, c.optimal_cloud_errors, c.trials);
  cloud.sigma2_q1 = c.sigma2_q1;
  cloud.sigma2_q2 = c.sigma2_q2;
  try {
    cloud.e_cloud = cloud_error_exponent(cfg, c.sigma2_q1, c.sigma2_q2);
  } catch (const std::exception&) {
  }
  out.push_back(std::move(cloud));
}

std::vector<ExperimentRecord> run_fig3(const SystemConfig& base,
                                       const FigureOptions& opt) {
  std::vector<ExperimentRecord> out;
  const std::vector<double> grid = {0.1, 0.2, 0.5, 1, 2,
                                    5,   10,  20,  50, 100};
  const std::vector<double> caps = {0.5, 5};
  for (double s2g : grid) {
    SystemConfig cfg = base;
    cfg.mu_g = 0.0;
    cfg.sigma2_g = s2g;
    ExperimentRecord edge =
        base_record("fig3", "sigma2_g", s2g, "edge", opt.seed);
    edge.e_edge = edge_error_exponent(cfg);
    out.push_back(std::move(edge));
    for (double cap : caps) {
      SystemConfig ccfg = cfg;
      ccfg.fronthaul_capacity = cap;
      const QuantizationSpec spec = solve_quantization_variance(ccfg);
      ExperimentRecord cloud = base_record(
          "fig3", "sigma2_g", s2g, "cloud_c" + fmt_short(cap), opt.seed);
      cloud.e_cloud = cloud_error_exponent(ccfg, spec.sigma2_q_cell1,
                                           spec.sigma2_q_cell2);
      cloud.sigma2_q1 = spec.sigma2_q_cell1;
      cloud.sigma2_q2 = spec.sigma2_q_cell2;
      out.push_back(std::move(cloud));
    }
  }
  return out;
}

std::vector<ExperimentRecord> run_fig4(const SystemConfig& base,
                                       const FigureOptions& opt) {
  std::vector<ExperimentRecord> out;
  const std::vector<double> caps = {0.25, 0.5, 1, 2, 5};
  const std::vector<double> snrs = {3, 8};
  for (double cap : caps) {
    for (double snr : snrs) {
      SystemConfig cfg = base;
      cfg.mu_g = 0.0;
      cfg.sigma2_g = 1.0;
      cfg.snr_db = snr;
      cfg.fronthaul_capacity = cap;
      const std::string tag = "_snr" + fmt_short(snr);
      ExperimentRecord edge =
          base_record("fig4", "capacity", cap, "edge" + tag, opt.seed);
      edge.e_edge = edge_error_exponent(cfg);
      out.push_back(std::move(edge));
      const QuantizationSpec spec = solve_quantization_variance(cfg);
      ExperimentRecord cloud =
          base_record("fig4", "capacity", cap, "cloud" + tag, opt.seed);
      cloud.e_cloud =
          cloud_error_exponent(cfg, spec.sigma2_q_cell1, spec.sigma2_q_cell2);
      cloud.sigma2_q1 = spec.sigma2_q_cell1;
      cloud.sigma2_q2 = spec.sigma2_q_cell2;
      out.push_back(std::move(cloud));
    }
  }
  return out;
}

std::vector<ExperimentRecord> run_fig5(const SystemConfig& base,
                                       const FigureOptions& opt) {
  std::vector<ExperimentRecord> out;
  const std::vector<double> grid = {0.5, 1, 2, 4};
  for (double s2g : grid) {
    SystemConfig cfg = base;
    cfg.sigma2_g = s2g;
    cfg.reuse_mode = ReuseMode::NonOrthogonal;
    optimal_point_rows(out, "fig5", "sigma2_g", s2g, "", cfg, opt);
    SystemConfig ocfg = cfg;
    ocfg.reuse_mode = ReuseMode::Orthogonal;
    optimal_point_rows(out, "fig5", "sigma2_g", s2g, "_orth", ocfg, opt);
  }
  return out;
}

std::vector<ExperimentRecord> run_fig6(const SystemConfig& base,
                                       const FigureOptions& opt) {
  std::vector<ExperimentRecord> out;
  const std::vector<double> caps = {0.25, 0.5, 1, 2, 5};
  for (double cap : caps) {
    SystemConfig cfg = base;
    cfg.fronthaul_capacity = cap;
    optimal_point_rows(out, "fig6", "capacity", cap, "", cfg, opt);
  }
  return out;
}

std::vector<ExperimentRecord> run_fig7(const SystemConfig& base,
                                       const FigureOptions& opt) {
  std::vector<ExperimentRecord> out;
  const std::vector<double> rhos = {0, 0.25, 0.5, 0.75, 0.95};
  for (double rho : rhos) {
    SystemConfig cfg = base;
    cfg.rho = rho;
    optimal_point_rows(out, "fig7", "rho", rho, "", cfg, opt);
  }
  return out;
}

std::vector<ExperimentRecord> run_fig7b(const SystemConfig& base,
                                        const FigureOptions& opt) {
  std::vector<ExperimentRecord> out;
  const std::vector<double> snrs = {0, 3, 6, 9, 12};
  const std::vector<double> s2gs = {1, 4};
  for (double snr : snrs) {
    for (double s2g : s2gs) {
      SystemConfig cfg = base;
      cfg.lambda = 8.0;
      cfg.fronthaul_capacity = 10.0;
      cfg.l_intervals = 10;
      cfg.snr_db = snr;
      cfg.sigma2_g = s2g;
      optimal_point_rows(out, "fig7b", "snr_db", snr, "_s2g" + fmt_short(s2g),
                         cfg, opt);
    }
  }
  return out;
}

std::vector<ExperimentRecord> run_fig8(const SystemConfig& base,
                                       const FigureOptions& opt) {
  std::vector<ExperimentRecord> out;
  const std::vector<int> sizes = {100, 1000, 10000};
  const QuantizationSpec spec = solve_quantization_variance(base);
  TrainOptions topt;
  topt.epochs = opt.epochs;
  for (int n : sizes) {
    const Dataset d1 =
        generate_dataset(base, n, DatasetTarget::EdgeCell1, nullptr, opt.seed);
    const Dataset d2 =
        generate_dataset(base, n, DatasetTarget::EdgeCell2, nullptr, opt.seed);
    const Dataset dc =
        generate_dataset(base, n, DatasetTarget::Cloud, &spec, opt.seed);
    const TrainedModel m1 = train_classifier(d1, topt);
    const TrainedModel m2 = train_classifier(d2, topt);
    const TrainedModel mc = train_classifier(dc, topt);

    EvalRequest req;
    req.optimal_edge = true;
    req.optimal_cloud = true;
    req.learned_edge1 = &m1.mlp;
    req.learned_edge2 = &m2.mlp;
    req.learned_cloud = &mc.mlp;
    const EvalCounts c =
        evaluate_joint_errors(base, req, opt.trials, opt.seed, opt.workers);

    const double value = static_cast<double>(n);
    ExperimentRecord edge = base_record("fig8", "n_train", value, "edge", opt.seed);
    fill_pe(edge, c.optimal_edge_errors, c.trials);
    out.push_back(std::move(edge));
    ExperimentRecord cloud =
        base_record("fig8", "n_train", value, "cloud", opt.seed);
    fill_pe(cloud, c.optimal_cloud_errors, c.trials);
    cloud.sigma2_q1 = c.sigma2_q1;
    cloud.sigma2_q2 = c.sigma2_q2;
    out.push_back(std::move(cloud));
    ExperimentRecord ledge =
        base_record("fig8", "n_train", value, "learned_edge", opt.seed);
    fill_pe(ledge, c.learned_edge_errors, c.trials);
    out.push_back(std::move(ledge));
    ExperimentRecord lcloud =
        base_record("fig8", "n_train", value, "learned_cloud", opt.seed);
    fill_pe(lcloud, c.learned_cloud_errors, c.trials);
    lcloud.sigma2_q1 = c.sigma2_q1;
    lcloud.sigma2_q2 = c.sigma2_q2;
    out.push_back(std::move(lcloud));
  }
  return out;
}

}  // namespace

ExperimentRecord estimate_pe(const SystemConfig& cfg, DetectorKind kind,
                             long long n_trials, std::uint64_t seed, int workers,
                             const LearnedModels* models) {
  EvalRequest req;
  switch (kind) {
    case DetectorKind::OptimalEdge:
      req.optimal_edge = true;
      break;
    case DetectorKind::OptimalCloud:
      req.optimal_cloud = true;
      break;
    case DetectorKind::LearnedEdge:
      if (models == nullptr || models->edge1 == nullptr ||
          models->edge2 == nullptr)
        throw std::invalid_argument("learned edge estimate needs both cell models");
      req.learned_edge1 = models->edge1;
      req.learned_edge2 = models->edge2;
      break;
    case DetectorKind::LearnedCloud:
      if (models == nullptr || models->cloud == nullptr)
        throw std::invalid_argument("learned cloud estimate needs a model");
      req.learned_cloud = models->cloud;
      break;
  }
  const EvalCounts c = evaluate_joint_errors(cfg, req, n_trials, seed, workers);

  ExperimentRecord r =
      base_record("pe", "none", 0.0, detector_kind_name(kind), seed);
  long long errors = 0;
  switch (kind) {
    case DetectorKind::OptimalEdge:
      errors = c.optimal_edge_errors;
      break;
    case DetectorKind::OptimalCloud:
      errors = c.optimal_cloud_errors;
      break;
    case DetectorKind::LearnedEdge:
      errors = c.learned_edge_errors;
      break;
    case DetectorKind::LearnedCloud:
      errors = c.learned_cloud_errors;
      break;
  }
  fill_pe(r, errors, c.trials);
  if (c.used_quantization) {
    r.sigma2_q1 = c.sigma2_q1;
    r.sigma2_q2 = c.sigma2_q2;
  }
  if (kind == DetectorKind::OptimalEdge) {
    try {
      r.e_edge = edge_error_exponent(cfg);
    } catch (const std::exception&) {
    }
  }
  if (kind == DetectorKind::OptimalCloud) {
    try {
      r.e_cloud = cloud_error_exponent(cfg, c.sigma2_q1, c.sigma2_q2);
    } catch (const std::exception&) {
    }
  }
  return r;
}

void write_records_csv(std::ostream& out,
                       const std::vector<ExperimentRecord>& records) {
  out << "sweep,param,value,detector,pe,ci_lo,ci_hi,trials,e_edge,e_cloud,"
         "sigma2_q1,sigma2_q2,seed\n";
  auto opt_field = [](const std::optional<double>& v) {
    return v ? fmt17(*v) : std::string();
  };
  for (const ExperimentRecord& r : records) {
    out << csv_field(r.sweep) << ',' << csv_field(r.param) << ','
        << fmt17(r.value) << ',' << csv_field(r.detector) << ','
        << opt_field(r.pe) << ',' << opt_field(r.ci_lo) << ','
        << opt_field(r.ci_hi) << ','
        << (r.trials ? std::to_string(*r.trials) : std::string()) << ','
        << opt_field(r.e_edge) << ',' << opt_field(r.e_cloud) << ','
        << opt_field(r.sigma2_q1) << ',' << opt_field(r.sigma2_q2) << ','
        << std::to_string(r.seed) << '\n';
  }
}

void write_records_csv(const std::string& path,
                       const std::vector<ExperimentRecord>& records) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write csv file: " + path);
  write_records_csv(out, records);
  if (!out) throw std::runtime_error("failed writing csv file: " + path);
}

std::vector<std::string> figure_names() {
  return {"fig3", "fig4", "fig5", "fig6", "fig7", "fig7b", "fig8"};
}

std::vector<ExperimentRecord> run_figure(const std::string& name,
                                         const SystemConfig& base,
                                         const FigureOptions& opt) {
  if (name == "fig3") return run_fig3(base, opt);
  if (name == "fig4") return run_fig4(base, opt);
  if (name == "fig5") return run_fig5(base, opt);
  if (name == "fig6") return run_fig6(base, opt);
  if (name == "fig7") return run_fig7(base, opt);
  if (name == "fig7b") return run_fig7b(base, opt);
  if (name == "fig8") return run_fig8(base, opt);
  throw std::invalid_argument("unknown figure plan: " + name);
}

}  // namespace tbma
