#pragma once

#include "epfw/models/spec.hpp"
#include "epfw/types.hpp"

namespace epfw::models {

// Exact k-nearest-neighbor regressor over the stored (scaled) training set.
// Neighbor search is a deliberate linear scan: results must be invariant to
// any acceleration structure, so none is used.
struct KnnModel {
  Matrix train_X;
  Vector train_y;
  int k = 11;
  bool distance_weighting = true;
};

// Validates k <= rows and stores the set.
KnnModel fit_knn(const Matrix& X, const Vector& y, const KnnParams& params);

// Inverse-distance weighted mean of the k nearest by Euclidean distance
// (ties on distance resolve to the lower row index). Any exact-distance-zero
// neighbor short-circuits to the plain mean of all zero-distance targets.
Vector predict(const KnnModel& model, const Matrix& X);

}  // namespace epfw::models
