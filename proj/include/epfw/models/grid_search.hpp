#pragma once

#include <string>
#include <utility>
#include <vector>

#include "epfw/features/matrix.hpp"
#include "epfw/models/model.hpp"
#include "epfw/models/spec.hpp"

namespace epfw::models {

using ParamGrid = std::vector<std::pair<std::string, std::vector<double>>>;

struct GridPoint {
  std::vector<std::pair<std::string, double>> assignment;
  double validation_mae = 0.0;
};

struct GridSearchResult {
  ModelSpec best;
  double best_mae = 0.0;
  std::vector<GridPoint> table;  // full Cartesian product, in product order
};

// Exhaustive product search: the first grid parameter varies slowest. Every
// point is fitted on train and scored by validation MAE; ties keep the first
// point in product order. The product size is checked against the budget
// before any training happens.
GridSearchResult grid_search(const ModelSpec& base, const ParamGrid& grids,
                             const features::FeatureMatrix& train,
                             const features::FeatureMatrix& validation,
                             long budget);

}  // namespace epfw::models
