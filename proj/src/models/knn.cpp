#include "epfw/models/knn.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "epfw/errors.hpp"

namespace epfw::models {

KnnModel fit_knn(const Matrix& X, const Vector& y, const KnnParams& params) {
  if (X.rows() == 0) {
    throw RunError("cannot fit on an empty matrix");
  }
  if (X.rows() != y.size()) {
    throw RunError("rows and targets disagree");
  }
  if (!X.allFinite() || !y.allFinite()) {
    throw RunError("training input contains non-finite values");
  }
  if (params.k > X.rows()) {
    throw RunError("k = " + std::to_string(params.k) + " exceeds the " +
                   std::to_string(X.rows()) + " training rows");
  }
  KnnModel model;
  model.train_X = X;
  model.train_y = y;
  model.k = params.k;
  model.distance_weighting = params.distance_weighting;
  return model;
}

Vector predict(const KnnModel& model, const Matrix& X) {
  const Index n = model.train_X.rows();
  const Index k = model.k;
  Vector out(X.rows());
  Vector dist2(n);
  std::vector<Index> idx(static_cast<std::size_t>(n));

  for (Index q = 0; q < X.rows(); ++q) {
    // Explicit row differences keep a distance of exactly zero exact, which
    // the short-circuit rule depends on (a Gram-trick expansion would not).
    dist2 = (model.train_X.rowwise() - X.row(q)).rowwise().squaredNorm();

    double zero_sum = 0.0;
    Index zero_count = 0;
    for (Index i = 0; i < n; ++i) {
      if (dist2[i] == 0.0) {
        zero_sum += model.train_y[i];
        ++zero_count;
      }
    }
    if (zero_count > 0) {
      out[q] = zero_sum / static_cast<double>(zero_count);
      continue;
    }

    std::iota(idx.begin(), idx.end(), Index{0});
    std::partial_sort(idx.begin(), idx.begin() + k, idx.end(),
                      [&](Index a, Index b) {
                        return dist2[a] != dist2[b] ? dist2[a] < dist2[b]
                                                    : a < b;
                      });
    if (model.distance_weighting) {
      double weight_sum = 0.0;
      double value = 0.0;
      for (Index j = 0; j < k; ++j) {
        const Index i = idx[static_cast<std::size_t>(j)];
        const double w = 1.0 / std::sqrt(dist2[i]);
        weight_sum += w;
        value += w * model.train_y[i];
      }
      out[q] = value / weight_sum;
    } else {
      double value = 0.0;
      for (Index j = 0; j < k; ++j) {
        value += model.train_y[idx[static_cast<std::size_t>(j)]];
      }
      out[q] = value / static_cast<double>(k);
    }
  }
  return out;
}

}  // namespace epfw::models
