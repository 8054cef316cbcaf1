#include "tbma/learned.hpp"

#include <cmath>
#include <stdexcept>

namespace tbma {

int feature_dim(const SystemConfig& cfg, DatasetTarget target) {
  const int per_cell = 2 * cfg.effective_levels() * cfg.l_intervals;
  return target == DatasetTarget::Cloud ? 2 * per_cell : per_cell;
}

Eigen::VectorXd flatten_features(const SystemConfig& cfg,
                                 const TrialObservation& obs,
                                 DatasetTarget target) {
  const int m_eff = cfg.effective_levels();
  Eigen::VectorXd out(feature_dim(cfg, target));
  Eigen::Index at = 0;
  auto push_row = [&](const ReceivedRow& row) {
    for (int m = 0; m < m_eff; ++m) {
      out(at++) = row[m].real();
      out(at++) = row[m].imag();
    }
  };
  for (int l = 0; l < cfg.l_intervals; ++l) {
    switch (target) {
      case DatasetTarget::EdgeCell1:
        push_row(obs.cell1[l]);
        break;
      case DatasetTarget::EdgeCell2:
        push_row(obs.cell2[l]);
        break;
      case DatasetTarget::Cloud:
        push_row(obs.cell1[l]);
        push_row(obs.cell2[l]);
        break;
    }
  }
  return out;
}

Dataset generate_dataset(const SystemConfig& cfg, int n, DatasetTarget target,
                         const QuantizationSpec* spec, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("dataset needs at least one sample");
  if (target == DatasetTarget::Cloud && spec == nullptr)
    throw std::invalid_argument(
        "both-cell dataset requires a solved forwarding-noise spec");

  Dataset ds;
  ds.target = target;
  ds.cfg = cfg;
  ds.seed = seed;
  ds.inputs.resize(n, feature_dim(cfg, target));
  ds.labels.resize(n);
  ds.traces.reserve(n);

  const std::uint64_t tag = static_cast<std::uint64_t>(target);
  for (int i = 0; i < n; ++i) {
    Rng rng = Rng::stream(seed, stream_tag::kDataset,
                          static_cast<std::uint64_t>(i), tag);
    const QoiPair q = sample_qoi_pair(cfg, rng);
    CollectionTrace trace = simulate_trace(cfg, q, rng);
    if (target == DatasetTarget::Cloud) {
      trace.received.cell1 =
          add_forwarding_noise(trace.received.cell1, spec->sigma2_q_cell1, rng);
      trace.received.cell2 =
          add_forwarding_noise(trace.received.cell2, spec->sigma2_q_cell2, rng);
    }
    ds.inputs.row(i) = flatten_features(cfg, trace.received, target);
    switch (target) {
      case DatasetTarget::EdgeCell1:
        ds.labels(i) = q.theta1;
        break;
      case DatasetTarget::EdgeCell2:
        ds.labels(i) = q.theta2;
        break;
      case DatasetTarget::Cloud:
        ds.labels(i) = 2 * q.theta1 + q.theta2;
        break;
    }
    ds.traces.push_back(std::move(trace));
  }
  return ds;
}

void save_dataset_csv(const std::string& path, const Dataset& ds) {
  write_trace_csv(path, ds.traces);
}

TrainedModel train_classifier(const Dataset& ds, const TrainOptions& opt) {
  const Eigen::Index n = ds.inputs.rows();
  const Eigen::Index d = ds.inputs.cols();
  if (n < 1) throw std::invalid_argument("empty training set");
  if (opt.learning_rate <= 0.0)
    throw std::invalid_argument("learning rate must be positive");
  if (opt.epochs < 0) throw std::invalid_argument("epochs must be nonnegative");

  std::vector<int> dims;
  dims.push_back(static_cast<int>(d));
  for (int h : opt.hidden) dims.push_back(h);
  dims.push_back(ds.target == DatasetTarget::Cloud ? 4 : 1);

  Rng init = Rng::stream(ds.seed, stream_tag::kInit,
                         static_cast<std::uint64_t>(ds.target));
  TrainedModel tm;
  tm.mlp = Mlp(dims, init);

  const Eigen::VectorXd mean = ds.inputs.colwise().mean();
  Eigen::VectorXd stddev(d);
  for (Eigen::Index c = 0; c < d; ++c) {
    const double var =
        (ds.inputs.col(c).array() - mean(c)).square().sum() /
        static_cast<double>(n);
    stddev(c) = std::sqrt(var);
  }
  tm.mlp.set_standardization(mean, stddev);

  // train_epoch reports the loss at the weights it steps away from, so the
  // state to fall back to on a non-finite loss is the one from the epoch
  // before, and the weights left by the final step need their own check.
  tm.loss_trace.reserve(opt.epochs);
  std::vector<Eigen::MatrixXd> last_finite = tm.mlp.weights();
  for (int e = 0; e < opt.epochs; ++e) {
    std::vector<Eigen::MatrixXd> entering = tm.mlp.weights();
    const double loss = tm.mlp.train_epoch(ds.inputs, ds.labels, opt.learning_rate);
    if (!std::isfinite(loss)) {
      tm.mlp.weights() = last_finite;
      return tm;
    }
    last_finite = std::move(entering);
    tm.loss_trace.push_back(loss);
  }
  if (opt.epochs > 0 && !std::isfinite(tm.mlp.loss(ds.inputs, ds.labels)))
    tm.mlp.weights() = last_finite;
  return tm;
}

QoiPair decode_joint_label(int label) {
  if (label < 0 || label > 3) throw std::invalid_argument("joint label out of range");
  return QoiPair{label / 2, label % 2};
}

}  // namespace tbma
