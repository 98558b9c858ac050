#pragma once

#include <cstdint>
#include <vector>

#include "epfw/models/spec.hpp"
#include "epfw/models/tree.hpp"
#include "epfw/types.hpp"

namespace epfw::models {

struct ForestModel {
  std::vector<RegressionTree> trees;
};

// Bagged trees: each member sees a bootstrap resample of the rows (size n,
// with replacement) and draws ceil(sqrt(p)) candidate features per split.
// Both randomizations can be disabled for the degenerate single-tree
// identity. A min_samples_split below 2 is clamped with a warning.
ForestModel fit_random_forest(const Matrix& X, const Vector& y,
                              const RandomForestParams& params,
                              std::uint64_t seed);

// Arithmetic mean over member trees.
Vector predict(const ForestModel& model, const Matrix& X);

struct BoostModel {
  double init = 0.0;  // mean of the training targets
  double learning_rate = 0.0;
  std::vector<RegressionTree> trees;
};

// Classic shrinkage boosting on squared error: every stage fits a tree to
// the current residuals and adds learning_rate times its prediction.
// stage_mse, when given, receives the training MSE after every stage; with
// mean leaves and rate in (0, 1] it is non-increasing.
BoostModel fit_gradient_boost(const Matrix& X, const Vector& y,
                              const GradientBoostParams& params,
                              std::vector<double>* stage_mse = nullptr);

Vector predict(const BoostModel& model, const Matrix& X);

}  // namespace epfw::models
