#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "tbma/airlink.hpp"
#include "tbma/config.hpp"
#include "tbma/fronthaul.hpp"
#include "tbma/mlp.hpp"

namespace tbma {

enum class DatasetTarget { EdgeCell1, EdgeCell2, Cloud };

// Features per sample: 2 * slots * intervals for one cell, doubled when both
// cells' samples are stacked.
int feature_dim(const SystemConfig& cfg, DatasetTarget target);

// Fixed feature order: interval by interval, (both-cell targets: cell 1 then
// cell 2,) slot by slot, real part then imaginary part.
Eigen::VectorXd flatten_features(const SystemConfig& cfg,
                                 const TrialObservation& obs,
                                 DatasetTarget target);

struct Dataset {
  Eigen::MatrixXd inputs;  // one sample per row
  Eigen::VectorXi labels;  // edge targets: own-cell state; both-cell: 2j + k
  DatasetTarget target = DatasetTarget::EdgeCell1;
  SystemConfig cfg;        // generating configuration
  std::uint64_t seed = 0;
  std::vector<CollectionTrace> traces;  // per-sample rows backing the file form
};

// Simulates n labeled samples, one derived stream per sample. A Cloud target
// requires the solved forwarding-noise spec and stores the distorted samples
// (what the central detector actually sees); edge targets take nullptr.
Dataset generate_dataset(const SystemConfig& cfg, int n, DatasetTarget target,
                         const QuantizationSpec* spec, std::uint64_t seed);

// Per-interval rows in the collection-trace layout (post-distortion samples
// for Cloud datasets); byte-identical for a fixed seed.
void save_dataset_csv(const std::string& path, const Dataset& ds);

struct TrainOptions {
  std::vector<int> hidden = {32, 32};
  double learning_rate = 0.01;
  int epochs = 2000;
};

struct TrainedModel {
  Mlp mlp;
  std::vector<double> loss_trace;  // pre-update loss per epoch
};

// Standardizes features on the training set, initializes {D, hidden..., out}
// from a stream derived from the dataset seed, then runs full-batch descent.
// If the loss ever leaves the reals the last finite state is kept.
TrainedModel train_classifier(const Dataset& ds, const TrainOptions& opt);

// Splits a 4-class decision back into the two per-cell states.
QoiPair decode_joint_label(int label);

}  // namespace tbma
