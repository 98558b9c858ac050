#pragma once

#include <cmath>
#include <optional>

#include "epfw/errors.hpp"
#include "epfw/types.hpp"

namespace epfw {

// An evaluation window: actuals and predictions on the same hourly index.
// pre_context optionally carries the m hours of actuals immediately before
// the window, which is what the seasonal naive forecast consumes.
struct ForecastPair {
  Vector actual;
  Vector predicted;
  std::optional<Vector> pre_context;
};

namespace detail {

template <typename DerivedA, typename DerivedB>
void check_pair(const Eigen::MatrixBase<DerivedA>& actual,
                const Eigen::MatrixBase<DerivedB>& predicted) {
  if (actual.size() == 0) {
    throw DataError("metric on an empty window");
  }
  if (actual.size() != predicted.size()) {
    throw DataError("actual and predicted lengths differ (" +
                    std::to_string(actual.size()) + " vs " +
                    std::to_string(predicted.size()) + ")");
  }
  if (!actual.allFinite() || !predicted.allFinite()) {
    throw DataError("metric input contains non-finite values");
  }
}

}  // namespace detail

// Mean absolute error, (1/n) sum |y_i - yhat_i|.
template <typename DerivedA, typename DerivedB>
double mae(const Eigen::MatrixBase<DerivedA>& actual,
           const Eigen::MatrixBase<DerivedB>& predicted) {
  detail::check_pair(actual, predicted);
  return (actual - predicted).cwiseAbs().sum() /
         static_cast<double>(actual.size());
}

// Root mean squared error, sqrt((1/n) sum (y_i - yhat_i)^2).
template <typename DerivedA, typename DerivedB>
double rmse(const Eigen::MatrixBase<DerivedA>& actual,
            const Eigen::MatrixBase<DerivedB>& predicted) {
  detail::check_pair(actual, predicted);
  return std::sqrt((actual - predicted).squaredNorm() /
                   static_cast<double>(actual.size()));
}

// Seasonal naive forecast. Input is the evaluation window prefixed with
// exactly m hours of pre-context; output has input.size() - m entries where
// prediction k is the actual m hours earlier.
template <typename Derived>
Vector naive_forecast(const Eigen::MatrixBase<Derived>& with_context, int m) {
  if (m <= 0) {
    throw DataError("seasonal length must be positive");
  }
  if (with_context.size() <= m) {
    throw DataError("naive forecast needs " + std::to_string(m) +
                    " hours of pre-context plus a nonempty window, got " +
                    std::to_string(with_context.size()) + " values");
  }
  return with_context.head(with_context.size() - m);
}

// Relative MAE. Numerator averages |p_k - phat_k| over all N window hours;
// the denominator averages the in-window seasonal differences
// |p_i - p_{i-m}| over the N - m hours where they exist. The index
// asymmetry is deliberate: an in-window persistence forecast scores exactly
// (N - m) / N, not 1.
template <typename DerivedA, typename DerivedB>
double rmae(const Eigen::MatrixBase<DerivedA>& actual,
            const Eigen::MatrixBase<DerivedB>& predicted, int m = 24) {
  detail::check_pair(actual, predicted);
  const auto n = actual.size();
  if (m <= 0) {
    throw DataError("seasonal length must be positive");
  }
  if (n <= m) {
    throw DataError("rmae window of " + std::to_string(n) +
                    " hours is not longer than the seasonal length " +
                    std::to_string(m));
  }
  const double denominator =
      (actual.tail(n - m) - actual.head(n - m)).cwiseAbs().sum() /
      static_cast<double>(n - m);
  if (denominator == 0.0) {
    throw DataError("naive baseline degenerate: window is exactly " +
                    std::to_string(m) + "-periodic");
  }
  const double numerator =
      (actual - predicted).cwiseAbs().sum() / static_cast<double>(n);
  return numerator / denominator;
}

inline double mae(const ForecastPair& pair) {
  return mae(pair.actual, pair.predicted);
}

inline double rmse(const ForecastPair& pair) {
  return rmse(pair.actual, pair.predicted);
}

inline double rmae(const ForecastPair& pair, int m = 24) {
  return rmae(pair.actual, pair.predicted, m);
}

}  // namespace epfw
