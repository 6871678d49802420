#pragma once

#include <cstddef>
#include <span>

namespace quip::models {

struct EvalReport {
  double accuracy = 0;
  double precision = 0;
  double recall = 0;
  double f1 = 0;
  double roc_auc = 0;
  bool roc_auc_defined = false;  // false when only one class is present
  size_t n_examples = 0;
};

// Threshold metrics with 0/0 defined as 0; ROC-AUC via the Mann-Whitney rank
// statistic with average ranks for tied scores.
EvalReport evaluate(std::span<const double> scores, std::span<const int> labels,
                    double threshold = 0.5);

double rank_auc(std::span<const double> scores, std::span<const int> labels);

}  // namespace quip::models
