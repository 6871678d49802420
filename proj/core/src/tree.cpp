#include "quip/models/tree.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "quip/error.hpp"

namespace quip::models {

double tree_predict(const std::vector<Node>& nodes, std::span<const double> row) {
  int32_t cur = 0;
  while (nodes[static_cast<size_t>(cur)].feature >= 0) {
    const Node& n = nodes[static_cast<size_t>(cur)];
    cur = row[static_cast<size_t>(n.feature)] <= n.threshold ? n.left : n.right;
  }
  return nodes[static_cast<size_t>(cur)].value;
}

namespace {

struct SortedColumn {
  std::vector<std::pair<double, size_t>> entries;  // (value, sample index) ascending
};

// Classification split search. The score of a split is
//   (posL^2 + negL^2)/nL + (posR^2 + negR^2)/nR,
// strictly increasing in the Gini decrease; counts are integers so the
// arithmetic is reproducible and an exhaustive oracle lands on the same split.
struct GiniSplit {
  bool found = false;
  int feature = -1;
  double threshold = 0;
  double score = 0;
};

GiniSplit best_gini_split(const Matrix& x, std::span<const int> y,
                          std::span<const size_t> indices, int min_samples_leaf) {
  const size_t n = indices.size();
  int64_t pos = 0;
  for (size_t i : indices) pos += y[i];
  const int64_t neg = static_cast<int64_t>(n) - pos;
  const double parent_score =
      static_cast<double>(pos * pos + neg * neg) / static_cast<double>(n);

  GiniSplit best;
  std::vector<std::pair<double, size_t>> col(n);
  for (size_t f = 0; f < x.cols; ++f) {
    for (size_t k = 0; k < n; ++k) col[k] = {x.at(indices[k], f), indices[k]};
    std::sort(col.begin(), col.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });

    int64_t pos_l = 0;
    for (size_t k = 1; k < n; ++k) {
      pos_l += y[col[k - 1].second];
      if (col[k - 1].first == col[k].first) continue;  // midpoints need distinct values
      const auto n_l = static_cast<int64_t>(k);
      const auto n_r = static_cast<int64_t>(n - k);
      if (n_l < min_samples_leaf || n_r < min_samples_leaf) continue;
      const int64_t neg_l = n_l - pos_l;
      const int64_t pos_r = pos - pos_l;
      const int64_t neg_r = neg - neg_l;
      const double score =
          static_cast<double>(pos_l * pos_l + neg_l * neg_l) / static_cast<double>(n_l) +
          static_cast<double>(pos_r * pos_r + neg_r * neg_r) / static_cast<double>(n_r);
      if (score > parent_score && (!best.found || score > best.score)) {
        best.found = true;
        best.feature = static_cast<int>(f);
        best.threshold = (col[k - 1].first + col[k].first) / 2.0;
        best.score = score;
      }
    }
  }
  if (best.found) {
    // Gini decrease of the split; callers weight it by the node fraction.
    best.score = (best.score - parent_score) / static_cast<double>(n);
  }
  return best;
}

struct SseSplit {
  bool found = false;
  int feature = -1;
  double threshold = 0;
  double score = 0;
};

// Regression split: maximize sumL^2/nL + sumR^2/nR (equivalently minimize SSE).
SseSplit best_sse_split(const Matrix& x, std::span<const double> t,
                        std::span<const size_t> indices, int min_samples_leaf) {
  const size_t n = indices.size();
  double sum = 0;
  for (size_t i : indices) sum += t[i];
  const double parent_score = sum * sum / static_cast<double>(n);

  SseSplit best;
  double best_raw = 0;
  std::vector<std::pair<double, size_t>> col(n);
  for (size_t f = 0; f < x.cols; ++f) {
    for (size_t k = 0; k < n; ++k) col[k] = {x.at(indices[k], f), indices[k]};
    std::sort(col.begin(), col.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });

    double sum_l = 0;
    for (size_t k = 1; k < n; ++k) {
      sum_l += t[col[k - 1].second];
      if (col[k - 1].first == col[k].first) continue;
      const auto n_l = static_cast<int64_t>(k);
      const auto n_r = static_cast<int64_t>(n - k);
      if (n_l < min_samples_leaf || n_r < min_samples_leaf) continue;
      const double sum_r = sum - sum_l;
      const double score = sum_l * sum_l / static_cast<double>(n_l) +
                           sum_r * sum_r / static_cast<double>(n_r);
      if (score > parent_score && (!best.found || score > best_raw)) {
        best.found = true;
        best_raw = score;
        best.feature = static_cast<int>(f);
        best.threshold = (col[k - 1].first + col[k].first) / 2.0;
      }
    }
  }
  if (best.found) best.score = (best_raw - parent_score) / static_cast<double>(n);
  return best;
}

void check_finite(const Matrix& x) {
  for (double v : x.data) {
    if (!std::isfinite(v)) throw ValueError("models: non-finite feature value");
  }
}

}  // namespace

TreeModel TreeModel::train(const Matrix& x, std::span<const int> y, const TreeParams& params) {
  if (x.rows == 0 || x.rows != y.size())
    throw ValueError("models: training data is empty or misaligned");
  if (params.max_depth < 0 || params.min_samples_leaf < 1)
    throw ValueError("models: bad tree hyperparameters");
  check_finite(x);

  std::vector<Node> nodes;

  // Recursive build; `indices` is consumed per node.
  auto build = [&](auto&& self, std::vector<size_t> indices, int depth) -> int32_t {
    const size_t n = indices.size();
    int64_t pos = 0;
    for (size_t i : indices) pos += y[i];

    auto node_id = static_cast<int32_t>(nodes.size());
    nodes.emplace_back();
    nodes.back().n_samples = static_cast<int32_t>(n);
    nodes.back().value = static_cast<double>(pos) / static_cast<double>(n);

    const bool pure = pos == 0 || pos == static_cast<int64_t>(n);
    if (pure || depth >= params.max_depth) return node_id;

    GiniSplit split = best_gini_split(x, y, indices, params.min_samples_leaf);
    if (!split.found) return node_id;

    std::vector<size_t> left_idx, right_idx;
    left_idx.reserve(n);
    right_idx.reserve(n);
    for (size_t i : indices) {
      (x.at(i, static_cast<size_t>(split.feature)) <= split.threshold ? left_idx : right_idx)
          .push_back(i);
    }
    indices.clear();
    indices.shrink_to_fit();

    nodes[static_cast<size_t>(node_id)].feature = split.feature;
    nodes[static_cast<size_t>(node_id)].threshold = split.threshold;
    nodes[static_cast<size_t>(node_id)].gain = split.score;
    int32_t left = self(self, std::move(left_idx), depth + 1);
    nodes[static_cast<size_t>(node_id)].left = left;
    int32_t right = self(self, std::move(right_idx), depth + 1);
    nodes[static_cast<size_t>(node_id)].right = right;
    return node_id;
  };

  std::vector<size_t> all(x.rows);
  std::iota(all.begin(), all.end(), size_t{0});
  build(build, std::move(all), 0);

  return TreeModel(std::move(nodes), params, x.cols);
}

double TreeModel::predict_proba(std::span<const double> row) const {
  if (row.size() != n_features_)
    throw SchemaError("models: expected " + std::to_string(n_features_) + " features, got " +
                      std::to_string(row.size()));
  return tree_predict(nodes_, row);
}

std::vector<double> TreeModel::impurity_decreases() const {
  std::vector<double> out(n_features_, 0.0);
  if (nodes_.empty()) return out;
  const auto root_n = static_cast<double>(nodes_.front().n_samples);
  for (const Node& n : nodes_) {
    if (n.feature >= 0)
      out[static_cast<size_t>(n.feature)] += n.gain * static_cast<double>(n.n_samples) / root_n;
  }
  return out;
}

std::vector<Node> train_regression_tree(const Matrix& x, std::span<const double> targets,
                                        std::span<const double> hessians, int max_depth,
                                        int min_samples_leaf) {
  if (x.rows == 0 || x.rows != targets.size() || x.rows != hessians.size())
    throw ValueError("models: regression tree data misaligned");

  std::vector<Node> nodes;
  auto leaf_value = [&](const std::vector<size_t>& indices) {
    double num = 0, den = 0;
    for (size_t i : indices) {
      num += targets[i];
      den += hessians[i];
    }
    return den > 1e-12 ? num / den : 0.0;
  };

  auto build = [&](auto&& self, std::vector<size_t> indices, int depth) -> int32_t {
    auto node_id = static_cast<int32_t>(nodes.size());
    nodes.emplace_back();
    nodes.back().n_samples = static_cast<int32_t>(indices.size());
    nodes.back().value = leaf_value(indices);

    if (depth >= max_depth) return node_id;
    SseSplit split = best_sse_split(x, targets, indices, min_samples_leaf);
    if (!split.found) return node_id;

    std::vector<size_t> left_idx, right_idx;
    for (size_t i : indices) {
      (x.at(i, static_cast<size_t>(split.feature)) <= split.threshold ? left_idx : right_idx)
          .push_back(i);
    }
    indices.clear();
    indices.shrink_to_fit();

    nodes[static_cast<size_t>(node_id)].feature = split.feature;
    nodes[static_cast<size_t>(node_id)].threshold = split.threshold;
    nodes[static_cast<size_t>(node_id)].gain = split.score;
    int32_t left = self(self, std::move(left_idx), depth + 1);
    nodes[static_cast<size_t>(node_id)].left = left;
    int32_t right = self(self, std::move(right_idx), depth + 1);
    nodes[static_cast<size_t>(node_id)].right = right;
    return node_id;
  };

  std::vector<size_t> all(x.rows);
  std::iota(all.begin(), all.end(), size_t{0});
  build(build, std::move(all), 0);
  return nodes;
}

}  // namespace quip::models
