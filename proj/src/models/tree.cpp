#include "epfw/models/tree.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "epfw/errors.hpp"

namespace epfw::models {
namespace {

struct SplitChoice {
  bool found = false;
  int feature = -1;
  double threshold = 0.0;
  double child_sse = 0.0;
};

struct Grower {
  const Matrix& X;
  const Vector& y;
  const TreeGrowth& growth;
  Rng* rng;
  std::vector<int> order;       // row indices, partitioned in place
  std::vector<int> scratch;     // per-node sort buffer
  std::vector<TreeNode> nodes;

  // Chooses candidate feature indices for one split, ascending.
  std::vector<int> candidate_features() {
    const int p = static_cast<int>(X.cols());
    if (growth.features_per_split <= 0 || growth.features_per_split >= p) {
      std::vector<int> all(static_cast<std::size_t>(p));
      std::iota(all.begin(), all.end(), 0);
      return all;
    }
    if (rng == nullptr) {
      throw RunError("per-split feature sampling requires a random source");
    }
    std::vector<int> pool(static_cast<std::size_t>(p));
    std::iota(pool.begin(), pool.end(), 0);
    std::vector<int> chosen;
    chosen.reserve(static_cast<std::size_t>(growth.features_per_split));
    for (int i = 0; i < growth.features_per_split; ++i) {
      const auto j = static_cast<std::size_t>(
          rng->uniform_int(i, static_cast<std::int64_t>(p) - 1));
      std::swap(pool[static_cast<std::size_t>(i)], pool[j]);
      chosen.push_back(pool[static_cast<std::size_t>(i)]);
    }
    std::sort(chosen.begin(), chosen.end());
    return chosen;
  }

  SplitChoice best_split(int begin, int end) {
    SplitChoice best;
    const int n = end - begin;
    for (const int f : candidate_features()) {
      scratch.assign(order.begin() + begin, order.begin() + end);
      std::sort(scratch.begin(), scratch.end(), [&](int a, int b) {
        const double xa = X(a, f);
        const double xb = X(b, f);
        return xa != xb ? xa < xb : a < b;
      });
      // Prefix sums let every boundary's two-sided squared error come out in
      // one pass: sse = sumsq - sum^2 / n per side.
      double left_sum = 0.0;
      double left_sumsq = 0.0;
      double total_sum = 0.0;
      double total_sumsq = 0.0;
      for (const int i : scratch) {
        total_sum += y[i];
        total_sumsq += y[i] * y[i];
      }
      for (int b = 0; b + 1 < n; ++b) {
        const int row = scratch[static_cast<std::size_t>(b)];
        left_sum += y[row];
        left_sumsq += y[row] * y[row];
        const double xa = X(row, f);
        const double xb = X(scratch[static_cast<std::size_t>(b) + 1], f);
        if (xa == xb) {
          continue;  // not a boundary between distinct values
        }
        const int nl = b + 1;
        const int nr = n - nl;
        const double right_sum = total_sum - left_sum;
        const double right_sumsq = total_sumsq - left_sumsq;
        const double sse_l =
            std::max(0.0, left_sumsq - left_sum * left_sum / nl);
        const double sse_r =
            std::max(0.0, right_sumsq - right_sum * right_sum / nr);
        const double sse = sse_l + sse_r;
        if (!best.found || sse < best.child_sse) {
          best.found = true;
          best.feature = f;
          // Midpoint, except when adjacent doubles round it onto xb, which
          // would move the xb rows to the wrong side of the evaluated
          // boundary; xa with the <=-goes-left rule keeps the exact prefix.
          double threshold = xa + (xb - xa) / 2.0;
          if (threshold >= xb) {
            threshold = xa;
          }
          best.threshold = threshold;
          best.child_sse = sse;
        }
      }
    }
    return best;
  }

  int grow(int begin, int end, int depth) {
    const int n = end - begin;
    double sum = 0.0;
    double sumsq = 0.0;
    for (int i = begin; i < end; ++i) {
      const double v = y[order[static_cast<std::size_t>(i)]];
      sum += v;
      sumsq += v * v;
    }
    const double mean = sum / n;
    const double sse = std::max(0.0, sumsq - sum * sum / n);

    const int id = static_cast<int>(nodes.size());
    nodes.push_back(TreeNode{});
    nodes[static_cast<std::size_t>(id)].value = mean;

    const bool at_depth_limit =
        growth.max_depth > 0 && depth >= growth.max_depth;
    if (n < growth.min_samples_split || at_depth_limit || sse <= 0.0) {
      return id;
    }
    const SplitChoice split = best_split(begin, end);
    if (!split.found) {
      return id;  // all candidate features constant within the node
    }

    const auto mid_it = std::partition(
        order.begin() + begin, order.begin() + end, [&](int row) {
          return X(row, split.feature) <= split.threshold;
        });
    const int mid = static_cast<int>(mid_it - order.begin());

    nodes[static_cast<std::size_t>(id)].feature = split.feature;
    nodes[static_cast<std::size_t>(id)].threshold = split.threshold;
    const int left = grow(begin, mid, depth + 1);
    nodes[static_cast<std::size_t>(id)].left = left;
    const int right = grow(mid, end, depth + 1);
    nodes[static_cast<std::size_t>(id)].right = right;
    return id;
  }
};

}  // namespace

int RegressionTree::depth() const {
  if (nodes_.empty()) {
    return 0;
  }
  // Depth of node 0 is 0; children sit one deeper.
  std::vector<std::pair<int, int>> stack{{0, 0}};
  int deepest = 0;
  while (!stack.empty()) {
    const auto [id, d] = stack.back();
    stack.pop_back();
    deepest = std::max(deepest, d);
    const TreeNode& n = nodes_[static_cast<std::size_t>(id)];
    if (!n.is_leaf()) {
      stack.emplace_back(n.left, d + 1);
      stack.emplace_back(n.right, d + 1);
    }
  }
  return deepest;
}

Vector RegressionTree::predict(const Matrix& X) const {
  Vector out(X.rows());
  for (Index r = 0; r < X.rows(); ++r) {
    out[r] = predict_row(X.row(r));
  }
  return out;
}

RegressionTree fit_tree(const Matrix& X, const Vector& y,
                        const TreeGrowth& growth, Rng* rng) {
  if (X.rows() == 0) {
    throw RunError("cannot fit a tree on an empty matrix");
  }
  if (X.rows() != y.size()) {
    throw RunError("tree fit: rows and targets disagree");
  }
  if (growth.min_samples_split < 2) {
    throw RunError("min_samples_split below 2 reached the tree learner");
  }
  Grower grower{X, y, growth, rng, {}, {}, {}};
  grower.order.resize(static_cast<std::size_t>(X.rows()));
  std::iota(grower.order.begin(), grower.order.end(), 0);
  grower.grow(0, static_cast<int>(X.rows()), 0);
  return RegressionTree(std::move(grower.nodes));
}

}  // namespace epfw::models
