#pragma once

#include <vector>

#include "epfw/rng.hpp"
#include "epfw/types.hpp"

namespace epfw::models {

struct TreeNode {
  int feature = -1;  // -1 marks a leaf
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  double value = 0.0;  // leaf prediction: mean of reaching targets

  bool is_leaf() const { return feature < 0; }
};

class RegressionTree {
 public:
  RegressionTree() = default;
  explicit RegressionTree(std::vector<TreeNode> nodes)
      : nodes_(std::move(nodes)) {}

  const std::vector<TreeNode>& nodes() const { return nodes_; }
  int depth() const;

  template <typename Derived>
  double predict_row(const Eigen::MatrixBase<Derived>& x) const {
    int node = 0;
    while (!nodes_[static_cast<std::size_t>(node)].is_leaf()) {
      const TreeNode& n = nodes_[static_cast<std::size_t>(node)];
      node = x[n.feature] <= n.threshold ? n.left : n.right;
    }
    return nodes_[static_cast<std::size_t>(node)].value;
  }

  Vector predict(const Matrix& X) const;

 private:
  std::vector<TreeNode> nodes_;
};

struct TreeGrowth {
  int max_depth = 0;          // <= 0 means unlimited
  int min_samples_split = 2;  // nodes smaller than this become leaves
  int features_per_split = 0; // <= 0 or >= p means all features
};

// Greedy CART: at each node the split minimizing total child squared error
// is chosen over candidate thresholds at midpoints of consecutive distinct
// sorted values; ties resolve to the lowest feature index, then the lowest
// threshold. Growth stops at max depth, undersized nodes, or zero variance.
// `rng` is consumed only when a proper feature subset is drawn per split.
RegressionTree fit_tree(const Matrix& X, const Vector& y,
                        const TreeGrowth& growth, Rng* rng = nullptr);

}  // namespace epfw::models
