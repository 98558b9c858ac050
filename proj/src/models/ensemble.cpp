#include "epfw/models/ensemble.hpp"

#include <cmath>

#include "epfw/errors.hpp"

namespace epfw::models {

ForestModel fit_random_forest(const Matrix& X, const Vector& y,
                              const RandomForestParams& params,
                              std::uint64_t seed) {
  if (X.rows() == 0) {
    throw RunError("cannot fit on an empty matrix");
  }
  if (X.rows() != y.size()) {
    throw RunError("rows and targets disagree");
  }
  if (!X.allFinite() || !y.allFinite()) {
    throw RunError("training input contains non-finite values");
  }

  int min_split = params.min_samples_split;
  if (min_split < 2) {
    log_warning("random_forest min_samples_split=" +
                std::to_string(min_split) +
                " cannot drive a split; clamping to 2");
    min_split = 2;
  }
  TreeGrowth growth;
  growth.max_depth = params.max_depth;
  growth.min_samples_split = min_split;
  growth.features_per_split =
      params.feature_subsets
          ? static_cast<int>(
                std::ceil(std::sqrt(static_cast<double>(X.cols()))))
          : 0;

  const Index n = X.rows();
  Rng rng(seed);
  ForestModel forest;
  forest.trees.reserve(static_cast<std::size_t>(params.trees));
  Matrix xb;
  Vector yb;
  for (int t = 0; t < params.trees; ++t) {
    if (params.bootstrap) {
      xb.resize(n, X.cols());
      yb.resize(n);
      for (Index i = 0; i < n; ++i) {
        const Index row = static_cast<Index>(rng.uniform_int(0, n - 1));
        xb.row(i) = X.row(row);
        yb[i] = y[row];
      }
      forest.trees.push_back(fit_tree(xb, yb, growth, &rng));
    } else {
      forest.trees.push_back(fit_tree(X, y, growth, &rng));
    }
  }
  return forest;
}

Vector predict(const ForestModel& model, const Matrix& X) {
  if (model.trees.empty()) {
    throw RunError("forest has no trees");
  }
  Vector sum = Vector::Zero(X.rows());
  for (const auto& tree : model.trees) {
    sum += tree.predict(X);
  }
  return sum / static_cast<double>(model.trees.size());
}

BoostModel fit_gradient_boost(const Matrix& X, const Vector& y,
                              const GradientBoostParams& params,
                              std::vector<double>* stage_mse) {
  if (X.rows() == 0) {
    throw RunError("cannot fit on an empty matrix");
  }
  if (X.rows() != y.size()) {
    throw RunError("rows and targets disagree");
  }
  if (!X.allFinite() || !y.allFinite()) {
    throw RunError("training input contains non-finite values");
  }

  TreeGrowth growth;
  growth.max_depth = params.max_depth;
  growth.min_samples_split = params.min_samples_split;
  growth.features_per_split = 0;

  BoostModel model;
  model.init = y.mean();
  model.learning_rate = params.learning_rate;
  model.trees.reserve(static_cast<std::size_t>(params.trees));

  Vector current = Vector::Constant(X.rows(), model.init);
  for (int stage = 0; stage < params.trees; ++stage) {
    const Vector residual = y - current;
    RegressionTree tree = fit_tree(X, residual, growth, nullptr);
    current += params.learning_rate * tree.predict(X);
    model.trees.push_back(std::move(tree));
    if (stage_mse != nullptr) {
      stage_mse->push_back((y - current).squaredNorm() /
                           static_cast<double>(X.rows()));
    }
  }
  return model;
}

Vector predict(const BoostModel& model, const Matrix& X) {
  Vector out = Vector::Constant(X.rows(), model.init);
  for (const auto& tree : model.trees) {
    out += model.learning_rate * tree.predict(X);
  }
  return out;
}

}  // namespace epfw::models
