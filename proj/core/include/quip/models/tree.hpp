#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "quip/matrix.hpp"

namespace quip::models {

// One node of a binary decision tree, stored flat in preorder. A node with
// feature < 0 is a leaf and `value` holds its output (class-1 probability for
// classification trees, additive step for boosted regression trees).
struct Node {
  int32_t feature = -1;
  double threshold = 0;
  int32_t left = -1;
  int32_t right = -1;
  double value = 0;
  int32_t n_samples = 0;
  double gain = 0;  // impurity decrease of the split, 0 for leaves
};

double tree_predict(const std::vector<Node>& nodes, std::span<const double> row);

struct TreeParams {
  int max_depth = 8;
  int min_samples_leaf = 1;
  uint64_t seed = 0;
};

// CART classification tree: greedy Gini splits, candidate thresholds at
// midpoints between consecutive distinct sorted values, ties in gain broken
// by lowest feature index then lowest threshold.
class TreeModel {
 public:
  static TreeModel train(const Matrix& x, std::span<const int> y, const TreeParams& params);

  double predict_proba(std::span<const double> row) const;

  const std::vector<Node>& nodes() const { return nodes_; }
  const TreeParams& params() const { return params_; }
  size_t n_features() const { return n_features_; }

  // Total weighted impurity decrease per feature (unnormalized).
  std::vector<double> impurity_decreases() const;

  TreeModel() = default;
  TreeModel(std::vector<Node> nodes, TreeParams params, size_t n_features)
      : nodes_(std::move(nodes)), params_(params), n_features_(n_features) {}

 private:
  std::vector<Node> nodes_;
  TreeParams params_;
  size_t n_features_ = 0;
};

// Least-squares regression tree fit to `targets`; leaf values take a Newton
// step sum(residual)/sum(hessian). Used by gradient boosting.
std::vector<Node> train_regression_tree(const Matrix& x, std::span<const double> targets,
                                        std::span<const double> hessians, int max_depth,
                                        int min_samples_leaf);

}  // namespace quip::models
