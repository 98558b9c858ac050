#include "epfw/models/linear.hpp"

#include <cmath>

#include "epfw/errors.hpp"
#include "epfw/rng.hpp"

namespace epfw::models {
namespace {

void check_training_input(const Matrix& X, const Vector& y) {
  if (X.rows() == 0) {
    throw RunError("cannot fit on an empty matrix");
  }
  if (X.rows() != y.size()) {
    throw RunError("rows and targets disagree (" + std::to_string(X.rows()) +
                   " vs " + std::to_string(y.size()) + ")");
  }
  if (!X.allFinite() || !y.allFinite()) {
    throw RunError("training input contains non-finite values");
  }
}

}  // namespace

LinearModel fit_ols(const Matrix& X, const Vector& y) {
  check_training_input(X, y);
  const Index n = X.rows();
  const Index p = X.cols();

  // Augmented system [X 1] so the intercept falls out of the same solve.
  Matrix a(n, p + 1);
  a.leftCols(p) = X;
  a.col(p).setOnes();
  const Matrix gram = a.transpose() * a;
  const Vector rhs = a.transpose() * y;

  const auto solve = [&](const Matrix& system,
                         Vector& out) -> bool {
    const Eigen::LDLT<Matrix> ldlt(system);
    if (ldlt.info() != Eigen::Success) {
      return false;
    }
    const Vector d = ldlt.vectorD();
    const double dmax = d.cwiseAbs().maxCoeff();
    if (!(dmax > 0.0) || d.cwiseAbs().minCoeff() < 1e-12 * dmax) {
      return false;
    }
    out = ldlt.solve(rhs);
    return out.allFinite() &&
           (system * out - rhs).norm() <= 1e-6 * (1.0 + rhs.norm());
  };

  Vector theta;
  if (!solve(gram, theta)) {
    Matrix jittered = gram;
    jittered.diagonal().array() += 1e-8;
    if (!solve(jittered, theta)) {
      throw RunError(
          "normal equations are singular even after diagonal jitter");
    }
  }

  LinearModel model;
  model.weights = theta.head(p);
  model.bias = theta[p];
  return model;
}

LinearModel fit_sgd_linear(const Matrix& X, const Vector& y,
                           const SgdLinearParams& params, std::uint64_t seed,
                           std::vector<double>* epoch_loss) {
  check_training_input(X, y);
  const Index n = X.rows();
  const Index p = X.cols();

  LinearModel model;
  model.weights = Vector::Zero(p);
  model.bias = 0.0;

  Rng rng(seed);
  const double lr = params.learning_rate;
  for (int epoch = 0; epoch < params.epochs; ++epoch) {
    const auto order = rng.permutation(n);
    for (Index start = 0; start < n;
         start += static_cast<Index>(params.batch_size)) {
      const Index m =
          std::min<Index>(params.batch_size, n - start);
      Matrix xb(m, p);
      Vector yb(m);
      for (Index i = 0; i < m; ++i) {
        const Index row =
            static_cast<Index>(order[static_cast<std::size_t>(start + i)]);
        xb.row(i) = X.row(row);
        yb[i] = y[row];
      }
      const Vector residual =
          ((xb * model.weights).array() + model.bias - yb.array()).matrix();
      const double scale = 2.0 / static_cast<double>(m);
      model.weights -= lr * scale * (xb.transpose() * residual);
      model.bias -= lr * scale * residual.sum();
    }
    const double loss =
        ((X * model.weights).array() + model.bias - y.array())
            .square()
            .mean();
    if (!std::isfinite(loss)) {
      throw RunError("dense0 training diverged at epoch " +
                     std::to_string(epoch) +
                     "; use a smaller learning rate");
    }
    if (epoch_loss != nullptr) {
      epoch_loss->push_back(loss);
    }
  }
  return model;
}

double svr_objective(const LinearModel& model, const Matrix& X,
                     const Vector& y, const LinearSvrParams& params) {
  const Vector residual =
      (y.array() - ((X * model.weights).array() + model.bias)).matrix();
  const auto excess =
      (residual.cwiseAbs().array() - params.epsilon).max(0.0);
  return 0.5 * model.weights.squaredNorm() +
         params.c * (excess * excess).sum();
}

LinearModel fit_linear_svr(const Matrix& X, const Vector& y,
                           const LinearSvrParams& params,
                           std::vector<double>* objective_trace) {
  check_training_input(X, y);
  const Index p = X.cols();

  LinearModel model;
  model.weights = Vector::Zero(p);
  model.bias = 0.0;

  // The objective's curvature is bounded by I + 2C A^T A with A = [X 1], so
  // 1/(1 + 2C ||A||_F^2) is a safe opening step; backtracking handles the
  // rest.
  const double lipschitz =
      1.0 + 2.0 * params.c *
                (X.squaredNorm() + static_cast<double>(X.rows()));
  const double max_step = 1.0 / lipschitz * 256.0;
  double step = 1.0 / lipschitz;

  double objective = svr_objective(model, X, y, params);
  if (objective_trace != nullptr) {
    objective_trace->push_back(objective);
  }

  for (int iter = 0; iter < params.max_iterations; ++iter) {
    const Vector residual =
        (y.array() - ((X * model.weights).array() + model.bias)).matrix();
    // d/dr of max(0,|r|-eps)^2 is 2*sign(r)*max(0,|r|-eps).
    const Vector slope =
        (residual.array().sign() *
         (residual.cwiseAbs().array() - params.epsilon).max(0.0))
            .matrix();
    const Vector grad_w =
        model.weights - 2.0 * params.c * (X.transpose() * slope);
    const double grad_b = -2.0 * params.c * slope.sum();
    const double grad_norm2 = grad_w.squaredNorm() + grad_b * grad_b;
    if (!std::isfinite(grad_norm2)) {
      throw RunError("linear_svr training diverged");
    }
    if (grad_norm2 <= 1e-20 * (1.0 + objective)) {
      break;
    }

    bool accepted = false;
    while (step > 1e-18) {
      LinearModel trial;
      trial.weights = model.weights - step * grad_w;
      trial.bias = model.bias - step * grad_b;
      const double trial_objective = svr_objective(trial, X, y, params);
      if (trial_objective <= objective - 1e-4 * step * grad_norm2) {
        model = std::move(trial);
        objective = trial_objective;
        accepted = true;
        break;
      }
      step /= 2.0;
    }
    if (!accepted) {
      break;  // no descent direction at representable step sizes
    }
    if (objective_trace != nullptr) {
      objective_trace->push_back(objective);
    }
    step = std::min(step * 2.0, max_step);
  }
  if (!std::isfinite(objective)) {
    throw RunError("linear_svr training diverged");
  }
  return model;
}

}  // namespace epfw::models
