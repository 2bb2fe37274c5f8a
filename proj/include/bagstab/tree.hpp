#pragma once

// Greedy least-squares regression trees (CART) on [0,1]^d.

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "bagstab/spaces.hpp"

namespace bagstab {

struct LabeledPoint {
  std::vector<double> x;
  double y = 0.0;
};

class RegressionTree {
 public:
  struct Node {
    int feature = -1;  ///< -1 marks a leaf
    double threshold = 0.0;
    double value = 0.0;  ///< leaf mean
    int left = -1;
    int right = -1;
  };

  RegressionTree(std::vector<Node> nodes, std::size_t dimension, std::size_t depth);

  double predict(std::span<const double> x) const;
  std::size_t depth() const { return depth_; }
  std::size_t dimension() const { return dimension_; }
  std::size_t leaf_count() const;
  const std::vector<Node>& nodes() const { return nodes_; }

 private:
  std::vector<Node> nodes_;
  std::size_t dimension_;
  std::size_t depth_;
};

/// Fits a tree by recursive binary splitting on x_f <= t, picking at each
/// node the split with the lowest summed squared error. Thresholds sit at
/// midpoints of consecutive distinct values; ties go to the lowest feature,
/// then the lowest threshold. A node stays a leaf when it holds one point,
/// sits at max_depth, or the best split gains less than 1e-12. Rows are put
/// in canonical order first, so the fit is invariant to row permutations.
RegressionTree tree_fit(std::span<const LabeledPoint> data, std::size_t max_depth);

/// Mean squared training error.
double training_mse(const RegressionTree& tree, std::span<const LabeledPoint> data);

/// The tree's predictions on a shared site set.
GridFunction tree_to_grid(const RegressionTree& tree, const std::shared_ptr<const EvaluationSites>& sites);

}  // namespace bagstab
