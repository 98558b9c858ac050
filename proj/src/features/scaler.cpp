#include "epfw/features/scaler.hpp"

#include <algorithm>
#include <cmath>

#include "epfw/errors.hpp"

namespace epfw::features {

std::vector<std::string> ScalerState::retained() const {
  std::vector<std::string> keep;
  keep.reserve(columns.size());
  for (const auto& name : columns) {
    if (std::find(dropped.begin(), dropped.end(), name) == dropped.end()) {
      keep.push_back(name);
    }
  }
  return keep;
}

ScalerState fit_scaler(const FeatureMatrix& matrix) {
  matrix.validate();
  const Index n = matrix.rows();
  if (n < 2) {
    throw DataError("scaler needs at least 2 rows, got " + std::to_string(n));
  }

  ScalerState state;
  state.columns = matrix.columns;
  state.mean = matrix.X.colwise().mean();
  state.std.resize(matrix.cols());
  for (Index c = 0; c < matrix.cols(); ++c) {
    const double var =
        (matrix.X.col(c).array() - state.mean[c]).square().sum() /
        static_cast<double>(n - 1);
    state.std[c] = std::sqrt(var);
    if (state.std[c] == 0.0) {
      state.dropped.push_back(matrix.columns[static_cast<std::size_t>(c)]);
      log_warning("dropping zero-variance feature '" +
                  matrix.columns[static_cast<std::size_t>(c)] + "'");
    }
  }
  return state;
}

FeatureMatrix apply_scaler(const ScalerState& state,
                           const FeatureMatrix& matrix) {
  matrix.validate();
  if (matrix.columns != state.columns) {
    std::string detail;
    for (const auto& name : state.columns) {
      if (std::find(matrix.columns.begin(), matrix.columns.end(), name) ==
          matrix.columns.end()) {
        detail += " missing:" + name;
      }
    }
    for (const auto& name : matrix.columns) {
      if (std::find(state.columns.begin(), state.columns.end(), name) ==
          state.columns.end()) {
        detail += " unknown:" + name;
      }
    }
    if (detail.empty()) {
      detail = " (same names, different order)";
    }
    throw DataError("scaler was fitted on a different column set:" + detail);
  }

  const auto keep = state.retained();
  FeatureMatrix out;
  out.columns = keep;
  out.y = matrix.y;
  out.keys = matrix.keys;
  out.X.resize(matrix.rows(), static_cast<Index>(keep.size()));
  Index oc = 0;
  for (Index c = 0; c < static_cast<Index>(state.columns.size()); ++c) {
    if (state.std[c] == 0.0) {
      continue;
    }
    out.X.col(oc++) =
        (matrix.X.col(c).array() - state.mean[c]) / state.std[c];
  }
  return out;
}

}  // namespace epfw::features
