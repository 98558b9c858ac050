#pragma once

#include <Eigen/Dense>

#include <string>

namespace epfw {

template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using Matrix = MatrixX<double>;
using Vector = VectorX<double>;
using Index = Eigen::Index;

// Non-fatal diagnostics (dropped columns, clamped hyperparameters, skipped
// report groups) go to stderr so they never disturb machine-readable output.
void log_warning(const std::string& message);

}  // namespace epfw
