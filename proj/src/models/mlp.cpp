#include "epfw/models/mlp.hpp"

#include <cmath>

#include "epfw/errors.hpp"

namespace epfw::models {

MlpNetwork::MlpNetwork(Index inputs, const std::vector<int>& hidden,
                       Rng& rng)
    : inputs_(inputs) {
  if (inputs <= 0) {
    throw RunError("network needs at least one input");
  }
  std::vector<Index> widths;
  widths.push_back(inputs);
  for (const int h : hidden) {
    widths.push_back(h);
  }
  widths.push_back(1);

  for (std::size_t l = 0; l + 1 < widths.size(); ++l) {
    const Index in = widths[l];
    const Index out = widths[l + 1];
    Matrix w(out, in);
    const double scale = 1.0 / std::sqrt(static_cast<double>(in));
    for (Index i = 0; i < out; ++i) {
      for (Index j = 0; j < in; ++j) {
        w(i, j) = rng.uniform(-scale, scale);
      }
    }
    weights_.push_back(std::move(w));
    biases_.push_back(Vector::Zero(out));
  }
}

Vector MlpNetwork::predict(const Matrix& X) const {
  // Activations carried as (units x samples).
  Matrix a = X.transpose();
  for (std::size_t l = 0; l < weights_.size(); ++l) {
    Matrix z = weights_[l] * a;
    z.colwise() += biases_[l];
    if (l + 1 < weights_.size()) {
      a = z.cwiseMax(0.0);
    } else {
      a = std::move(z);
    }
  }
  return a.row(0).transpose();
}

double MlpNetwork::loss_and_gradients(const Matrix& X, const Vector& y,
                                      std::vector<Matrix>& grad_w,
                                      std::vector<Vector>& grad_b) const {
  const std::size_t layer_count = weights_.size();
  const Index n = X.rows();

  std::vector<Matrix> activations;  // a_0 = inputs, a_l = post-activation
  activations.reserve(layer_count + 1);
  activations.push_back(X.transpose());
  std::vector<Matrix> pre;  // z_l per layer
  pre.reserve(layer_count);
  for (std::size_t l = 0; l < layer_count; ++l) {
    Matrix z = weights_[l] * activations.back();
    z.colwise() += biases_[l];
    pre.push_back(z);
    if (l + 1 < layer_count) {
      activations.push_back(z.cwiseMax(0.0));
    } else {
      activations.push_back(std::move(z));
    }
  }

  const auto prediction = activations.back().row(0).transpose();
  const Vector residual = prediction - y;
  const double loss = residual.squaredNorm() / static_cast<double>(n);

  grad_w.assign(layer_count, Matrix());
  grad_b.assign(layer_count, Vector());

  // dL/d(output) for MSE; propagated as (units x samples).
  Matrix delta =
      (2.0 / static_cast<double>(n)) * residual.transpose();
  for (std::size_t l = layer_count; l-- > 0;) {
    grad_w[l] = delta * activations[l].transpose();
    grad_b[l] = delta.rowwise().sum();
    if (l > 0) {
      delta = ((weights_[l].transpose() * delta).array() *
               (pre[l - 1].array() > 0.0).cast<double>())
                  .matrix();
    }
  }
  return loss;
}

void MlpNetwork::gradient_step(const std::vector<Matrix>& grad_w,
                               const std::vector<Vector>& grad_b, double lr) {
  for (std::size_t l = 0; l < weights_.size(); ++l) {
    weights_[l] -= lr * grad_w[l];
    biases_[l] -= lr * grad_b[l];
  }
}

Vector MlpNetwork::flatten() const {
  Index total = 0;
  for (std::size_t l = 0; l < weights_.size(); ++l) {
    total += weights_[l].size() + biases_[l].size();
  }
  Vector theta(total);
  Index at = 0;
  for (std::size_t l = 0; l < weights_.size(); ++l) {
    theta.segment(at, weights_[l].size()) =
        Eigen::Map<const Vector>(weights_[l].data(), weights_[l].size());
    at += weights_[l].size();
    theta.segment(at, biases_[l].size()) = biases_[l];
    at += biases_[l].size();
  }
  return theta;
}

void MlpNetwork::unflatten(const Vector& theta) {
  Index at = 0;
  for (std::size_t l = 0; l < weights_.size(); ++l) {
    if (at + weights_[l].size() + biases_[l].size() > theta.size()) {
      throw RunError("parameter vector too short for this network");
    }
    Eigen::Map<Vector>(weights_[l].data(), weights_[l].size()) =
        theta.segment(at, weights_[l].size());
    at += weights_[l].size();
    biases_[l] = theta.segment(at, biases_[l].size());
    at += biases_[l].size();
  }
  if (at != theta.size()) {
    throw RunError("parameter vector too long for this network");
  }
}

MlpNetwork fit_mlp(const Matrix& X, const Vector& y, const MlpParams& params,
                   std::uint64_t seed, std::vector<double>* epoch_loss) {
  if (X.rows() == 0) {
    throw RunError("cannot fit on an empty matrix");
  }
  if (X.rows() != y.size()) {
    throw RunError("rows and targets disagree");
  }
  if (!X.allFinite() || !y.allFinite()) {
    throw RunError("training input contains non-finite values");
  }

  Rng rng(seed);
  MlpNetwork net(X.cols(), params.hidden, rng);
  const Index n = X.rows();

  std::vector<Matrix> grad_w;
  std::vector<Vector> grad_b;
  for (int epoch = 0; epoch < params.epochs; ++epoch) {
    const auto order = rng.permutation(n);
    for (Index start = 0; start < n;
         start += static_cast<Index>(params.batch_size)) {
      const Index m = std::min<Index>(params.batch_size, n - start);
      Matrix xb(m, X.cols());
      Vector yb(m);
      for (Index i = 0; i < m; ++i) {
        const Index row =
            static_cast<Index>(order[static_cast<std::size_t>(start + i)]);
        xb.row(i) = X.row(row);
        yb[i] = y[row];
      }
      net.loss_and_gradients(xb, yb, grad_w, grad_b);
      net.gradient_step(grad_w, grad_b, params.learning_rate);
    }
    const double loss =
        (net.predict(X) - y).squaredNorm() / static_cast<double>(n);
    if (!std::isfinite(loss)) {
      throw RunError("mlp training diverged at epoch " +
                     std::to_string(epoch) +
                     "; use a smaller learning rate");
    }
    if (epoch_loss != nullptr) {
      epoch_loss->push_back(loss);
    }
  }
  return net;
}

}  // namespace epfw::models
