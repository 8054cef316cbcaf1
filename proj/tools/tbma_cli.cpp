#include <cstdint>
#include <iostream>
#include <stdexcept>
#include <string>

#include "CLI11.hpp"
#include "tbma/config.hpp"
#include "tbma/experiments.hpp"
#include "tbma/exponents.hpp"
#include "tbma/fronthaul.hpp"
#include "tbma/learned.hpp"

namespace {

struct CommonArgs {
  std::string config_path;
  std::uint64_t seed = 1;
  std::string out_path;
  long long trials = 100000;
  int workers = 1;
};

void add_common(CLI::App* cmd, CommonArgs* args) {
  cmd->add_option("--config", args->config_path, "key=value config file");
  cmd->add_option("--seed", args->seed, "base seed for all derived streams");
  cmd->add_option("--out", args->out_path, "output file path");
  cmd->add_option("--trials", args->trials, "Monte Carlo trials (train: samples)");
  cmd->add_option("--workers", args->workers, "worker threads for trials");
}

tbma::SystemConfig load_config(const CommonArgs& args) {
  if (args.config_path.empty()) {
    tbma::SystemConfig cfg;
    return tbma::validate_config(cfg);
  }
  return tbma::load_config_file(args.config_path);
}

void print_records(const std::vector<tbma::ExperimentRecord>& records,
                   const std::string& out_path) {
  if (out_path.empty()) {
    tbma::write_records_csv(std::cout, records);
  } else {
    tbma::write_records_csv(out_path, records);
    std::cout << "wrote " << records.size() << " rows to " << out_path << "\n";
  }
}

int run_exponents(const CommonArgs& args) {
  const tbma::SystemConfig cfg = load_config(args);
  const tbma::ExponentReport rep = tbma::exponent_report(cfg);
  std::cout << "e_edge " << rep.e_edge << "\n";
  std::cout << "e_cloud " << rep.e_cloud << "\n";
  std::cout << "sigma2_q " << rep.sigma2_q1 << " " << rep.sigma2_q2 << "\n";
  for (const tbma::PairExponent& p : rep.edge_breakdown)
    std::cout << "edge cell " << p.cell << " (" << p.j0 << p.k0 << ") vs ("
              << p.j1 << p.k1 << "): " << p.value << " alpha " << p.alpha
              << " jitter " << p.jitter << "\n";
  for (const tbma::PairExponent& p : rep.cloud_breakdown)
    std::cout << "cloud (" << p.j0 << p.k0 << ") vs (" << p.j1 << p.k1
              << "): " << p.value << " alpha " << p.alpha << " jitter "
              << p.jitter << "\n";
  if (!args.out_path.empty()) {
    tbma::write_exponent_report_csv(args.out_path, rep);
    std::cout << "wrote report to " << args.out_path << "\n";
  }
  return 0;
}

int run_pe(const CommonArgs& args) {
  const tbma::SystemConfig cfg = load_config(args);
  std::vector<tbma::ExperimentRecord> records;
  records.push_back(tbma::estimate_pe(cfg, tbma::DetectorKind::OptimalEdge,
                                      args.trials, args.seed, args.workers));
  records.push_back(tbma::estimate_pe(cfg, tbma::DetectorKind::OptimalCloud,
                                      args.trials, args.seed, args.workers));
  print_records(records, args.out_path);
  return 0;
}

int run_train(const CommonArgs& args, const std::string& target_name,
              int epochs, const std::string& dataset_out) {
  const tbma::SystemConfig cfg = load_config(args);
  tbma::DatasetTarget target;
  if (target_name == "edge1") {
    target = tbma::DatasetTarget::EdgeCell1;
  } else if (target_name == "edge2") {
    target = tbma::DatasetTarget::EdgeCell2;
  } else if (target_name == "cloud") {
    target = tbma::DatasetTarget::Cloud;
  } else {
    throw std::invalid_argument("unknown training target: " + target_name);
  }

  tbma::QuantizationSpec spec;
  const tbma::QuantizationSpec* spec_ptr = nullptr;
  if (target == tbma::DatasetTarget::Cloud) {
    spec = tbma::solve_quantization_variance(cfg);
    spec_ptr = &spec;
  }
  const tbma::Dataset ds = tbma::generate_dataset(
      cfg, static_cast<int>(args.trials), target, spec_ptr, args.seed);
  if (!dataset_out.empty()) {
    tbma::save_dataset_csv(dataset_out, ds);
    std::cout << "wrote dataset to " << dataset_out << "\n";
  }

  tbma::TrainOptions topt;
  topt.epochs = epochs;
  const tbma::TrainedModel tm = tbma::train_classifier(ds, topt);
  if (!tm.loss_trace.empty())
    std::cout << "loss " << tm.loss_trace.front() << " -> "
              << tm.loss_trace.back() << " over " << tm.loss_trace.size()
              << " epochs\n";
  const std::string model_path =
      args.out_path.empty() ? "model.txt" : args.out_path;
  tm.mlp.save(model_path);
  std::cout << "wrote model to " << model_path << "\n";
  return 0;
}

int run_figure_cmd(const CommonArgs& args, const std::string& name, int epochs) {
  const tbma::SystemConfig cfg = load_config(args);
  tbma::FigureOptions opt;
  opt.trials = args.trials;
  opt.seed = args.seed;
  opt.workers = args.workers;
  opt.epochs = epochs;
  const std::vector<tbma::ExperimentRecord> records =
      tbma::run_figure(name, cfg, opt);
  print_records(records, args.out_path);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-cell type-based collection: detectors, exponents, sweeps"};
  app.require_subcommand(1);

  CommonArgs exp_args;
  CLI::App* exp_cmd =
      app.add_subcommand("exponents", "analytic error exponents and breakdown");
  add_common(exp_cmd, &exp_args);

  CommonArgs pe_args;
  CLI::App* pe_cmd =
      app.add_subcommand("pe", "Monte Carlo joint error probability");
  add_common(pe_cmd, &pe_args);

  CommonArgs train_args;
  std::string train_target = "edge1";
  int train_epochs = 2000;
  std::string dataset_out;
  CLI::App* train_cmd =
      app.add_subcommand("train", "fit a classifier on simulated samples");
  add_common(train_cmd, &train_args);
  train_cmd->add_option("--target", train_target, "edge1, edge2, or cloud");
  train_cmd->add_option("--epochs", train_epochs, "gradient-descent epochs");
  train_cmd->add_option("--dataset-out", dataset_out, "also save the samples");

  CommonArgs fig_args;
  std::string fig_name;
  int fig_epochs = 2000;
  CLI::App* fig_cmd = app.add_subcommand("figure", "run a named sweep plan");
  fig_cmd->add_option("name", fig_name, "plan name (fig3..fig8)")->required();
  add_common(fig_cmd, &fig_args);
  fig_cmd->add_option("--epochs", fig_epochs, "training epochs for fig8");

  try {
    app.parse(argc, argv);
    if (exp_cmd->parsed()) return run_exponents(exp_args);
    if (pe_cmd->parsed()) return run_pe(pe_args);
    if (train_cmd->parsed())
      return run_train(train_args, train_target, train_epochs, dataset_out);
    if (fig_cmd->parsed()) return run_figure_cmd(fig_args, fig_name, fig_epochs);
    return 1;
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
