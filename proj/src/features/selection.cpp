#include "epfw/features/selection.hpp"

#include <cmath>
#include <cstdlib>

#include "epfw/errors.hpp"
#include "epfw/metrics.hpp"

namespace epfw::features {

EliminationResult backward_eliminate(const Trainer& trainer,
                                     const FeatureMatrix& train,
                                     const FeatureMatrix& validation) {
  if (!trainer) {
    throw ConfigError("backward elimination needs a trainer");
  }
  train.validate();
  validation.validate();
  if (train.columns.empty()) {
    throw DataError("backward elimination needs at least one feature");
  }
  if (train.columns != validation.columns) {
    throw DataError(
        "train and validation matrices carry different feature columns");
  }

  EliminationResult result;
  std::vector<std::string> current = train.columns;
  for (int step = 0; !current.empty(); ++step) {
    const FeatureMatrix fit_part = train.select_columns(current);
    const FeatureMatrix val_part = validation.select_columns(current);
    const models::TrainedModel model = trainer(fit_part);
    if (!model.has_coefficients()) {
      throw RunError("backward elimination requires a model with per-feature "
                     "coefficients; '" +
                     model.spec().name + "' exposes none");
    }

    EliminationStep record;
    record.step = step;
    record.columns = current;
    record.validation_mae = mae(val_part.y, model.predict(val_part));

    if (result.trail.empty() || record.validation_mae < result.best_mae) {
      result.best_mae = record.validation_mae;
      result.selected = current;
    }

    if (current.size() < 2) {
      result.trail.push_back(std::move(record));
      break;
    }

    const Vector coef = model.coefficients();
    Index weakest = 0;
    for (Index j = 1; j < coef.size(); ++j) {
      if (std::abs(coef[j]) < std::abs(coef[weakest])) {
        weakest = j;
      }
    }
    record.removed = current[static_cast<std::size_t>(weakest)];
    current.erase(current.begin() + weakest);
    result.trail.push_back(std::move(record));
  }
  return result;
}

std::pair<FeatureMatrix, FeatureMatrix> chronological_split(
    const FeatureMatrix& matrix, double validation_fraction) {
  if (!(validation_fraction > 0.0 && validation_fraction < 1.0)) {
    throw ConfigError("validation fraction must lie strictly between 0 and 1");
  }
  const Index n = matrix.rows();
  if (n < 2) {
    throw DataError("cannot split a matrix with fewer than 2 rows");
  }
  Index n_val = static_cast<Index>(
      std::llround(validation_fraction * static_cast<double>(n)));
  if (n_val < 1) n_val = 1;
  if (n_val > n - 1) n_val = n - 1;
  const Index n_train = n - n_val;

  FeatureMatrix head;
  head.columns = matrix.columns;
  head.X = matrix.X.topRows(n_train);
  head.y = matrix.y.head(n_train);
  head.keys.assign(matrix.keys.begin(), matrix.keys.begin() + n_train);

  FeatureMatrix tail;
  tail.columns = matrix.columns;
  tail.X = matrix.X.bottomRows(n_val);
  tail.y = matrix.y.tail(n_val);
  tail.keys.assign(matrix.keys.end() - n_val, matrix.keys.end());

  return {std::move(head), std::move(tail)};
}

}  // namespace epfw::features
