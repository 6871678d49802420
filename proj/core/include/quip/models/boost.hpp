#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "quip/matrix.hpp"
#include "quip/models/tree.hpp"

namespace quip::models {

struct BoostParams {
  int n_rounds = 200;
  double learning_rate = 0.1;
  int max_depth = 3;
  int min_samples_leaf = 1;
  uint64_t seed = 0;
};

// Gradient boosting for the logistic loss: start from the base-rate log-odds,
// then each round fits a regression tree to the residual y - p with Newton
// leaf values and adds learning_rate times its output.
class BoostModel {
 public:
  static BoostModel train(const Matrix& x, std::span<const int> y, const BoostParams& params);

  double decision(std::span<const double> row) const;       // accumulated log-odds
  double predict_proba(std::span<const double> row) const;  // sigmoid(decision)

  const std::vector<std::vector<Node>>& trees() const { return trees_; }
  const std::vector<double>& train_losses() const { return train_losses_; }
  double init_log_odds() const { return init_log_odds_; }
  const BoostParams& params() const { return params_; }
  size_t n_features() const { return n_features_; }

  std::vector<double> impurity_decreases() const;

  BoostModel() = default;
  BoostModel(double init, std::vector<std::vector<Node>> trees, std::vector<double> losses,
             BoostParams params, size_t n_features)
      : init_log_odds_(init),
        trees_(std::move(trees)),
        train_losses_(std::move(losses)),
        params_(params),
        n_features_(n_features) {}

 private:
  double init_log_odds_ = 0;
  std::vector<std::vector<Node>> trees_;
  std::vector<double> train_losses_;
  BoostParams params_;
  size_t n_features_ = 0;
};

double sigmoid(double z);

}  // namespace quip::models
