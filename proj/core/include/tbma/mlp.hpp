#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "tbma/rng.hpp"

namespace tbma {

// Small dense network: tanh hidden layers, linear output layer. The output
// is trained as a logistic score when output_dim == 1 and as softmax logits
// otherwise. Biases are folded into the weights via an implicit constant
// input appended to every layer. Inputs are shifted/scaled per feature by
// the stored standardization before the first layer.
class Mlp {
 public:
  Mlp() = default;
  // layer_dims = {input, hidden..., output}. Weights drawn uniformly from
  // +-1/sqrt(fan_in), row-major, layer by layer.
  Mlp(const std::vector<int>& layer_dims, Rng& rng);

  int input_dim() const { return dims_.front(); }
  int output_dim() const { return dims_.back(); }

  // X is one sample per row. Returns one logit row per sample.
  Eigen::MatrixXd logits(const Eigen::MatrixXd& X) const;

  // Mean cross-entropy of integer labels (binary: {0,1}; else class index).
  double loss(const Eigen::MatrixXd& X, const Eigen::VectorXi& y) const;

  // Full-batch gradient of loss() with respect to each weight matrix.
  std::vector<Eigen::MatrixXd> gradients(const Eigen::MatrixXd& X,
                                         const Eigen::VectorXi& y) const;

  // One full-batch gradient-descent step; returns the pre-step loss.
  double train_epoch(const Eigen::MatrixXd& X, const Eigen::VectorXi& y,
                     double lr);

  // Class probabilities: one column (sigmoid) for a binary head, else one
  // column per class summing to 1.
  Eigen::MatrixXd probabilities(const Eigen::MatrixXd& X) const;

  // Class decisions: argmax logit (binary: logit > 0), ties to the lower index.
  Eigen::VectorXi predict(const Eigen::MatrixXd& X) const;

  // Set from training data before fitting; applied inside logits().
  void set_standardization(const Eigen::VectorXd& mean,
                           const Eigen::VectorXd& stddev);

  std::vector<Eigen::MatrixXd>& weights() { return w_; }
  const std::vector<Eigen::MatrixXd>& weights() const { return w_; }

  void save(const std::string& path) const;
  static Mlp load(const std::string& path);

 private:
  Eigen::MatrixXd standardized(const Eigen::MatrixXd& X) const;
  Eigen::MatrixXd forward_store(const Eigen::MatrixXd& X,
                                std::vector<Eigen::MatrixXd>* acts) const;
  double loss_from_logits(const Eigen::MatrixXd& z, const Eigen::VectorXi& y) const;
  Eigen::MatrixXd dloss_dlogits(const Eigen::MatrixXd& z,
                                const Eigen::VectorXi& y) const;
  std::vector<Eigen::MatrixXd> backward(const std::vector<Eigen::MatrixXd>& acts,
                                        Eigen::MatrixXd dz) const;

  std::vector<int> dims_;
  std::vector<Eigen::MatrixXd> w_;  // layer l: (dims_[l] + 1) x dims_[l+1]
  Eigen::VectorXd feat_mean_;
  Eigen::VectorXd feat_scale_;  // reciprocal of per-feature spread
};

}  // namespace tbma
