#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "epfw/features/matrix.hpp"
#include "epfw/models/model.hpp"

namespace epfw::features {

// Fits a model on a feature matrix; the model must expose per-feature
// coefficients for backward elimination to rank features.
using Trainer = std::function<models::TrainedModel(const FeatureMatrix&)>;

struct EliminationStep {
  int step = 0;                  // 0 is the full feature set
  std::vector<std::string> columns;
  double validation_mae = 0.0;
  std::string removed;           // feature dropped after this step; empty on the last
};

struct EliminationResult {
  std::vector<std::string> selected;  // best-scoring subset on the path
  double best_mae = 0.0;
  std::vector<EliminationStep> trail;
};

// Greedy backward elimination: fit on the current columns, score validation
// MAE, drop the feature with the smallest |coefficient| (ties keep the
// earliest column), and repeat until a single feature remains. Every subset
// on the path is scored; the best validation MAE wins, earliest step on ties.
EliminationResult backward_eliminate(const Trainer& trainer,
                                     const FeatureMatrix& train,
                                     const FeatureMatrix& validation);

// Chronological split: the final rounded fraction of rows becomes the
// validation part. Both parts keep at least one row.
std::pair<FeatureMatrix, FeatureMatrix> chronological_split(
    const FeatureMatrix& matrix, double validation_fraction);

}  // namespace epfw::features
