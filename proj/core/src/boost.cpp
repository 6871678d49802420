#include "quip/models/boost.hpp"

#include <algorithm>
#include <cmath>

#include "quip/error.hpp"

namespace quip::models {

namespace {

constexpr double kProbClip = 1e-7;

double clip_prob(double p) { return std::clamp(p, kProbClip, 1.0 - kProbClip); }

double mean_bce(std::span<const double> probs, std::span<const int> y) {
  double loss = 0;
  for (size_t i = 0; i < probs.size(); ++i) {
    double p = clip_prob(probs[i]);
    loss += y[i] ? -std::log(p) : -std::log(1.0 - p);
  }
  return loss / static_cast<double>(probs.size());
}

}  // namespace

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

BoostModel BoostModel::train(const Matrix& x, std::span<const int> y, const BoostParams& params) {
  if (x.rows == 0 || x.rows != y.size())
    throw ValueError("models: training data is empty or misaligned");
  if (params.n_rounds < 1) throw ValueError("models: n_rounds must be >= 1");
  if (!(params.learning_rate > 0.0 && params.learning_rate <= 1.0))
    throw ValueError("models: learning_rate must be in (0,1]");

  const size_t n = x.rows;
  double base = 0;
  for (int label : y) base += label;
  base = clip_prob(base / static_cast<double>(n));
  const double init = std::log(base / (1.0 - base));

  std::vector<double> decision(n, init);
  std::vector<double> probs(n), residuals(n), hessians(n);
  std::vector<std::vector<Node>> trees;
  std::vector<double> losses;
  trees.reserve(static_cast<size_t>(params.n_rounds));
  losses.reserve(static_cast<size_t>(params.n_rounds));

  for (int round = 0; round < params.n_rounds; ++round) {
    for (size_t i = 0; i < n; ++i) {
      double p = sigmoid(decision[i]);
      probs[i] = p;
      residuals[i] = static_cast<double>(y[i]) - p;
      hessians[i] = p * (1.0 - p);
    }
    auto tree = train_regression_tree(x, residuals, hessians, params.max_depth,
                                      params.min_samples_leaf);
    for (size_t i = 0; i < n; ++i)
      decision[i] += params.learning_rate * tree_predict(tree, x.row(i));
    trees.push_back(std::move(tree));

    for (size_t i = 0; i < n; ++i) probs[i] = sigmoid(decision[i]);
    losses.push_back(mean_bce(probs, y));
  }
  return BoostModel(init, std::move(trees), std::move(losses), params, x.cols);
}

double BoostModel::decision(std::span<const double> row) const {
  if (row.size() != n_features_)
    throw SchemaError("models: expected " + std::to_string(n_features_) + " features, got " +
                      std::to_string(row.size()));
  double z = init_log_odds_;
  for (const auto& tree : trees_) z += params_.learning_rate * tree_predict(tree, row);
  return z;
}

double BoostModel::predict_proba(std::span<const double> row) const {
  return sigmoid(decision(row));
}

std::vector<double> BoostModel::impurity_decreases() const {
  std::vector<double> out(n_features_, 0.0);
  for (const auto& tree : trees_) {
    if (tree.empty()) continue;
    const auto root_n = static_cast<double>(tree.front().n_samples);
    for (const Node& node : tree) {
      if (node.feature >= 0)
        out[static_cast<size_t>(node.feature)] +=
            node.gain * static_cast<double>(node.n_samples) / root_n;
    }
  }
  return out;
}

}  // namespace quip::models
