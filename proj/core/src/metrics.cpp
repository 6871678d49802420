#include "quip/models/metrics.hpp"

#include <algorithm>
#include <numeric>
#include <vector>

#include "quip/error.hpp"

namespace quip::models {

double rank_auc(std::span<const double> scores, std::span<const int> labels) {
  const size_t n = scores.size();
  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), size_t{0});
  std::sort(order.begin(), order.end(),
            [&](size_t a, size_t b) { return scores[a] < scores[b]; });

  // Average ranks over tied score groups (1-based ranks).
  std::vector<double> rank(n, 0.0);
  size_t i = 0;
  while (i < n) {
    size_t j = i;
    while (j < n && scores[order[j]] == scores[order[i]]) ++j;
    const double avg = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
    for (size_t k = i; k < j; ++k) rank[order[k]] = avg;
    i = j;
  }

  double rank_sum_pos = 0;
  size_t n_pos = 0;
  for (size_t k = 0; k < n; ++k) {
    if (labels[k]) {
      rank_sum_pos += rank[k];
      ++n_pos;
    }
  }
  const size_t n_neg = n - n_pos;
  if (n_pos == 0 || n_neg == 0) return 0.0;
  const double u = rank_sum_pos - static_cast<double>(n_pos) * (static_cast<double>(n_pos) + 1.0) / 2.0;
  return u / (static_cast<double>(n_pos) * static_cast<double>(n_neg));
}

EvalReport evaluate(std::span<const double> scores, std::span<const int> labels,
                    double threshold) {
  if (scores.empty() || scores.size() != labels.size())
    throw ValueError("models: evaluate needs matching non-empty scores and labels");

  size_t tp = 0, tn = 0, fp = 0, fn = 0;
  for (size_t i = 0; i < scores.size(); ++i) {
    const bool pred = scores[i] >= threshold;
    if (pred && labels[i]) ++tp;
    else if (pred && !labels[i]) ++fp;
    else if (!pred && labels[i]) ++fn;
    else ++tn;
  }

  EvalReport r;
  r.n_examples = scores.size();
  r.accuracy = static_cast<double>(tp + tn) / static_cast<double>(scores.size());
  r.precision = (tp + fp) == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(tp + fp);
  r.recall = (tp + fn) == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(tp + fn);
  r.f1 = (r.precision + r.recall) == 0.0
             ? 0.0
             : 2.0 * r.precision * r.recall / (r.precision + r.recall);

  const size_t n_pos = tp + fn;
  r.roc_auc_defined = n_pos > 0 && n_pos < scores.size();
  r.roc_auc = r.roc_auc_defined ? rank_auc(scores, labels) : 0.0;
  return r;
}

}  // namespace quip::models
