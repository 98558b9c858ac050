#pragma once

#include <cstdint>
#include <vector>

#include "epfw/models/spec.hpp"
#include "epfw/rng.hpp"
#include "epfw/types.hpp"

namespace epfw::models {

// Fully-connected network: rectifier hidden layers, one linear output unit.
// Weights are stored per layer as (out x in) matrices; an empty hidden list
// leaves a single linear layer.
class MlpNetwork {
 public:
  MlpNetwork() = default;
  // Uniform fan-in initialization: entries of layer l drawn from
  // (-1/sqrt(in_l), 1/sqrt(in_l)); biases start at zero.
  MlpNetwork(Index inputs, const std::vector<int>& hidden, Rng& rng);

  Index inputs() const { return inputs_; }
  std::size_t layers() const { return weights_.size(); }
  const std::vector<Matrix>& weights() const { return weights_; }
  const std::vector<Vector>& biases() const { return biases_; }
  std::vector<Matrix>& weights() { return weights_; }
  std::vector<Vector>& biases() { return biases_; }

  Vector predict(const Matrix& X) const;

  // Mean-squared-error loss over the batch; fills the gradient of every
  // weight and bias (layouts parallel to weights()/biases()).
  double loss_and_gradients(const Matrix& X, const Vector& y,
                            std::vector<Matrix>& grad_w,
                            std::vector<Vector>& grad_b) const;

  void gradient_step(const std::vector<Matrix>& grad_w,
                     const std::vector<Vector>& grad_b, double lr);

  // All parameters as one vector (layer by layer, weights column-major then
  // bias); the inverse restores them. Used by finite-difference checks.
  Vector flatten() const;
  void unflatten(const Vector& theta);

 private:
  Index inputs_ = 0;
  std::vector<Matrix> weights_;
  std::vector<Vector> biases_;
};

// Mini-batch backpropagation, reshuffling each epoch from the seed.
// epoch_loss, when given, receives full-training-set MSE per epoch.
MlpNetwork fit_mlp(const Matrix& X, const Vector& y, const MlpParams& params,
                   std::uint64_t seed,
                   std::vector<double>* epoch_loss = nullptr);

}  // namespace epfw::models
