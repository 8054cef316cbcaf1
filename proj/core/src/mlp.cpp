#include "tbma/mlp.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <stdexcept>

namespace tbma {
namespace {

double softplus(double z) { return std::max(z, 0.0) + std::log1p(std::exp(-std::abs(z))); }

Eigen::MatrixXd layer_out(const Eigen::MatrixXd& a, const Eigen::MatrixXd& w) {
  const int in = static_cast<int>(w.rows()) - 1;
  Eigen::MatrixXd z = a * w.topRows(in);
  z.rowwise() += w.row(in);
  return z;
}

}  // namespace

Mlp::Mlp(const std::vector<int>& layer_dims, Rng& rng) : dims_(layer_dims) {
  if (dims_.size() < 2) throw std::invalid_argument("need at least input and output dims");
  for (int d : dims_)
    if (d < 1) throw std::invalid_argument("layer dims must be positive");
  w_.reserve(dims_.size() - 1);
  for (size_t l = 0; l + 1 < dims_.size(); ++l) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(dims_[l]));
    Eigen::MatrixXd w(dims_[l] + 1, dims_[l + 1]);
    for (Eigen::Index r = 0; r < w.rows(); ++r)
      for (Eigen::Index c = 0; c < w.cols(); ++c)
        w(r, c) = bound * (2.0 * rng.uniform() - 1.0);
    w_.push_back(std::move(w));
  }
}

void Mlp::set_standardization(const Eigen::VectorXd& mean,
                              const Eigen::VectorXd& stddev) {
  if (mean.size() != dims_.front() || stddev.size() != dims_.front())
    throw std::invalid_argument("standardization size must match input dim");
  feat_mean_ = mean;
  feat_scale_ = stddev.unaryExpr(
      [](double s) { return s > 1e-12 ? 1.0 / s : 1.0; });
}

Eigen::MatrixXd Mlp::standardized(const Eigen::MatrixXd& X) const {
  if (feat_mean_.size() == 0) return X;
  Eigen::MatrixXd out = X.rowwise() - feat_mean_.transpose();
  out.array().rowwise() *= feat_scale_.transpose().array();
  return out;
}

Eigen::MatrixXd Mlp::forward_store(const Eigen::MatrixXd& X,
                                   std::vector<Eigen::MatrixXd>* acts) const {
  Eigen::MatrixXd a = standardized(X);
  for (size_t l = 0; l < w_.size(); ++l) {
    if (acts) acts->push_back(a);
    a = layer_out(a, w_[l]);
    if (l + 1 < w_.size()) a = a.array().tanh().matrix();
  }
  return a;
}

Eigen::MatrixXd Mlp::logits(const Eigen::MatrixXd& X) const {
  return forward_store(X, nullptr);
}

double Mlp::loss_from_logits(const Eigen::MatrixXd& z,
                             const Eigen::VectorXi& y) const {
  const Eigen::Index n = z.rows();
  if (y.size() != n) throw std::invalid_argument("label count must match sample count");
  double total = 0.0;
  if (output_dim() == 1) {
    for (Eigen::Index i = 0; i < n; ++i)
      total += softplus(z(i, 0)) - static_cast<double>(y(i)) * z(i, 0);
  } else {
    for (Eigen::Index i = 0; i < n; ++i) {
      const double m = z.row(i).maxCoeff();
      const double lse = m + std::log((z.row(i).array() - m).exp().sum());
      total += lse - z(i, y(i));
    }
  }
  return total / static_cast<double>(n);
}

Eigen::MatrixXd Mlp::dloss_dlogits(const Eigen::MatrixXd& z,
                                   const Eigen::VectorXi& y) const {
  const Eigen::Index n = z.rows();
  Eigen::MatrixXd dz(n, output_dim());
  if (output_dim() == 1) {
    for (Eigen::Index i = 0; i < n; ++i)
      dz(i, 0) = 1.0 / (1.0 + std::exp(-z(i, 0))) - static_cast<double>(y(i));
  } else {
    for (Eigen::Index i = 0; i < n; ++i) {
      const double m = z.row(i).maxCoeff();
      Eigen::RowVectorXd p = (z.row(i).array() - m).exp();
      p /= p.sum();
      dz.row(i) = p;
      dz(i, y(i)) -= 1.0;
    }
  }
  dz /= static_cast<double>(n);
  return dz;
}

std::vector<Eigen::MatrixXd> Mlp::backward(const std::vector<Eigen::MatrixXd>& acts,
                                           Eigen::MatrixXd dz) const {
  std::vector<Eigen::MatrixXd> grads(w_.size());
  for (size_t l = w_.size(); l-- > 0;) {
    const int in = dims_[l];
    Eigen::MatrixXd g(in + 1, dims_[l + 1]);
    g.topRows(in) = acts[l].transpose() * dz;
    g.row(in) = dz.colwise().sum();
    grads[l] = std::move(g);
    if (l > 0) {
      const Eigen::MatrixXd da = dz * w_[l].topRows(in).transpose();
      // acts[l] is the tanh output of layer l - 1
      dz = (da.array() * (1.0 - acts[l].array().square())).matrix();
    }
  }
  return grads;
}

double Mlp::loss(const Eigen::MatrixXd& X, const Eigen::VectorXi& y) const {
  return loss_from_logits(logits(X), y);
}

std::vector<Eigen::MatrixXd> Mlp::gradients(const Eigen::MatrixXd& X,
                                            const Eigen::VectorXi& y) const {
  std::vector<Eigen::MatrixXd> acts;
  acts.reserve(w_.size());
  const Eigen::MatrixXd z = forward_store(X, &acts);
  return backward(acts, dloss_dlogits(z, y));
}

double Mlp::train_epoch(const Eigen::MatrixXd& X, const Eigen::VectorXi& y,
                        double lr) {
  std::vector<Eigen::MatrixXd> acts;
  acts.reserve(w_.size());
  const Eigen::MatrixXd z = forward_store(X, &acts);
  const double before = loss_from_logits(z, y);
  const std::vector<Eigen::MatrixXd> g = backward(acts, dloss_dlogits(z, y));
  for (size_t l = 0; l < w_.size(); ++l) w_[l] -= lr * g[l];
  return before;
}

Eigen::MatrixXd Mlp::probabilities(const Eigen::MatrixXd& X) const {
  Eigen::MatrixXd z = logits(X);
  if (output_dim() == 1) {
    for (Eigen::Index i = 0; i < z.rows(); ++i)
      z(i, 0) = 1.0 / (1.0 + std::exp(-z(i, 0)));
    return z;
  }
  for (Eigen::Index i = 0; i < z.rows(); ++i) {
    const double m = z.row(i).maxCoeff();
    Eigen::RowVectorXd p = (z.row(i).array() - m).exp();
    z.row(i) = p / p.sum();
  }
  return z;
}

Eigen::VectorXi Mlp::predict(const Eigen::MatrixXd& X) const {
  const Eigen::MatrixXd z = logits(X);
  Eigen::VectorXi out(z.rows());
  if (output_dim() == 1) {
    for (Eigen::Index i = 0; i < z.rows(); ++i) out(i) = z(i, 0) > 0.0 ? 1 : 0;
  } else {
    for (Eigen::Index i = 0; i < z.rows(); ++i) {
      int best = 0;
      for (int c = 1; c < output_dim(); ++c)
        if (z(i, c) > z(i, best)) best = c;
      out(i) = best;
    }
  }
  return out;
}

void Mlp::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write model file: " + path);
  out << std::setprecision(17);
  out << "mlp 1\n" << dims_.size();
  for (int d : dims_) out << ' ' << d;
  out << '\n' << (feat_mean_.size() > 0 ? 1 : 0) << '\n';
  if (feat_mean_.size() > 0) {
    for (Eigen::Index i = 0; i < feat_mean_.size(); ++i)
      out << feat_mean_(i) << (i + 1 < feat_mean_.size() ? ' ' : '\n');
    for (Eigen::Index i = 0; i < feat_scale_.size(); ++i)
      out << feat_scale_(i) << (i + 1 < feat_scale_.size() ? ' ' : '\n');
  }
  for (const Eigen::MatrixXd& w : w_) {
    out << w.rows() << ' ' << w.cols() << '\n';
    for (Eigen::Index r = 0; r < w.rows(); ++r)
      for (Eigen::Index c = 0; c < w.cols(); ++c)
        out << w(r, c) << (c + 1 < w.cols() ? ' ' : '\n');
  }
  if (!out) throw std::runtime_error("failed writing model file: " + path);
}

Mlp Mlp::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open model file: " + path);
  std::string tag;
  int version = 0;
  in >> tag >> version;
  if (tag != "mlp" || version != 1)
    throw std::runtime_error("unrecognized model file: " + path);
  size_t ndims = 0;
  in >> ndims;
  if (ndims < 2 || ndims > 64) throw std::runtime_error("bad model layer count");
  Mlp m;
  m.dims_.resize(ndims);
  for (size_t i = 0; i < ndims; ++i) in >> m.dims_[i];
  int has_std = 0;
  in >> has_std;
  if (has_std) {
    m.feat_mean_.resize(m.dims_.front());
    m.feat_scale_.resize(m.dims_.front());
    for (Eigen::Index i = 0; i < m.feat_mean_.size(); ++i) in >> m.feat_mean_(i);
    for (Eigen::Index i = 0; i < m.feat_scale_.size(); ++i) in >> m.feat_scale_(i);
  }
  m.w_.resize(ndims - 1);
  for (size_t l = 0; l + 1 < ndims; ++l) {
    Eigen::Index rows = 0, cols = 0;
    in >> rows >> cols;
    if (rows != m.dims_[l] + 1 || cols != m.dims_[l + 1])
      throw std::runtime_error("model weight shape mismatch");
    m.w_[l].resize(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r)
      for (Eigen::Index c = 0; c < cols; ++c) in >> m.w_[l](r, c);
  }
  if (!in) throw std::runtime_error("truncated model file: " + path);
  return m;
}

}  // namespace tbma
