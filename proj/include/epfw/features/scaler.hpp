#pragma once

#include <string>
#include <vector>

#include "epfw/features/matrix.hpp"
#include "epfw/types.hpp"

namespace epfw::features {

// Column standardization parameters, always fitted on the training window
// only. Zero-variance columns are recorded as dropped; apply removes them.
struct ScalerState {
  std::vector<std::string> columns;   // the full fitted column set, in order
  Vector mean;                        // per fitted column
  Vector std;                         // sample std, N-1 denominator
  std::vector<std::string> dropped;   // zero-variance columns

  std::vector<std::string> retained() const;
};

// Sample mean/std per column; zero-variance columns are flagged with a
// warning. Needs at least 2 rows.
ScalerState fit_scaler(const FeatureMatrix& matrix);

// Maps each retained cell to (x - mean) / std using the state's training
// statistics; drops flagged columns; leaves y untouched. The matrix must
// carry exactly the fitted column set.
FeatureMatrix apply_scaler(const ScalerState& state,
                           const FeatureMatrix& matrix);

}  // namespace epfw::features
