#include "epfw/models/grid_search.hpp"

#include "epfw/errors.hpp"
#include "epfw/metrics.hpp"

namespace epfw::models {

GridSearchResult grid_search(const ModelSpec& base, const ParamGrid& grids,
                             const features::FeatureMatrix& train,
                             const features::FeatureMatrix& validation,
                             long budget) {
  if (grids.empty()) {
    throw ConfigError("grid search needs at least one parameter grid");
  }
  long product = 1;
  for (const auto& [param, values] : grids) {
    if (values.empty()) {
      throw ConfigError("grid for '" + param + "' is empty");
    }
    if (values.size() > static_cast<std::size_t>(budget) ||
        product > budget / static_cast<long>(values.size())) {
      throw ConfigError("grid product exceeds the budget of " +
                        std::to_string(budget) + " evaluations");
    }
    product *= static_cast<long>(values.size());
  }

  GridSearchResult result;
  result.best = base;
  result.table.reserve(static_cast<std::size_t>(product));
  bool have_best = false;

  std::vector<std::size_t> at(grids.size(), 0);
  for (long point = 0; point < product; ++point) {
    ModelSpec candidate = base;
    GridPoint entry;
    for (std::size_t g = 0; g < grids.size(); ++g) {
      const double value = grids[g].second[at[g]];
      set_param(candidate, grids[g].first, value);
      entry.assignment.emplace_back(grids[g].first, value);
    }
    validate(candidate);

    const TrainedModel model = fit(candidate, train);
    entry.validation_mae = mae(validation.y, model.predict(validation));
    result.table.push_back(entry);
    if (!have_best || entry.validation_mae < result.best_mae) {
      have_best = true;
      result.best = candidate;
      result.best_mae = entry.validation_mae;
    }

    // Odometer increment, last parameter fastest.
    for (std::size_t g = grids.size(); g-- > 0;) {
      if (++at[g] < grids[g].second.size()) {
        break;
      }
      at[g] = 0;
    }
  }
  return result;
}

}  // namespace epfw::models
