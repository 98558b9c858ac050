#pragma once

#include <cstdint>
#include <vector>

#include "epfw/models/spec.hpp"
#include "epfw/types.hpp"

namespace epfw::models {

// Shared state of the affine family: OLS, dense0 and the linear SVR.
struct LinearModel {
  Vector weights;
  double bias = 0.0;
};

inline Vector predict(const LinearModel& model, const Matrix& X) {
  return (X * model.weights).array() + model.bias;
}

// Normal equations via LDLT. On detected singularity a diagonal jitter of
// 1e-8 is added and the solve retried once; a still-singular system throws.
LinearModel fit_ols(const Matrix& X, const Vector& y);

// Mini-batch gradient descent on mean squared error, weights initialized at
// zero, rows reshuffled each epoch from the seed. epoch_loss, when given,
// receives the full-training-set MSE after every epoch.
LinearModel fit_sgd_linear(const Matrix& X, const Vector& y,
                           const SgdLinearParams& params, std::uint64_t seed,
                           std::vector<double>* epoch_loss = nullptr);

// Primal objective 0.5*||w||^2 + C * sum max(0, |r_i| - epsilon)^2 with
// r = y - Xw - b.
double svr_objective(const LinearModel& model, const Matrix& X,
                     const Vector& y, const LinearSvrParams& params);

// Full-batch gradient descent from the origin with backtracking line search
// (step halves until Armijo decrease, recovering gently afterwards), capped
// at max_iterations. objective_trace, when given, receives the objective at
// every accepted iterate; it is non-increasing.
LinearModel fit_linear_svr(const Matrix& X, const Vector& y,
                           const LinearSvrParams& params,
                           std::vector<double>* objective_trace = nullptr);

}  // namespace epfw::models
