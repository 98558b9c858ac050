#pragma once

#include <string>
#include <variant>
#include <vector>

#include "epfw/features/matrix.hpp"
#include "epfw/models/ensemble.hpp"
#include "epfw/models/knn.hpp"
#include "epfw/models/linear.hpp"
#include "epfw/models/mlp.hpp"
#include "epfw/models/spec.hpp"
#include "epfw/types.hpp"

namespace epfw::models {

using ModelState =
    std::variant<LinearModel, MlpNetwork, KnnModel, ForestModel, BoostModel>;

// A fitted regressor bound to the feature columns it was trained on.
// Immutable; predict is reentrant.
class TrainedModel {
 public:
  TrainedModel(ModelSpec spec, std::vector<std::string> columns,
               ModelState state);

  const ModelSpec& spec() const { return spec_; }
  const std::vector<std::string>& columns() const { return columns_; }
  const ModelState& state() const { return state_; }

  // Requires the matrix to carry exactly the fitted columns, in order; the
  // error lists every difference. Rows with matching names never misalign.
  Vector predict(const features::FeatureMatrix& matrix) const;
  // Positional variant for columns already validated.
  Vector predict_rows(const Matrix& X) const;

  // Per-feature weights of the affine family (OLS, dense0, linear_svr).
  bool has_coefficients() const;
  Vector coefficients() const;  // throws for non-affine families
  double intercept() const;

  // Versioned single-document text container; stable within one version,
  // byte-deterministic for a given model.
  std::string serialize() const;
  static TrainedModel deserialize(const std::string& text);

 private:
  ModelSpec spec_;
  std::vector<std::string> columns_;
  ModelState state_;
};

// Family dispatch per spec; deterministic for a fixed (spec, data).
TrainedModel fit(const ModelSpec& spec, const features::FeatureMatrix& train);

}  // namespace epfw::models
