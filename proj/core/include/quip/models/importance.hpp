#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "quip/matrix.hpp"
#include "quip/models/boost.hpp"
#include "quip/models/tree.hpp"

namespace quip::models {

enum class ImportanceMethod { impurity, permutation };

// Throws on anything but "impurity" or "permutation".
ImportanceMethod importance_method_from_string(const std::string& name);

using RankedImportances = std::vector<std::pair<std::string, double>>;

// Impurity: per-feature total Gini decrease normalized to sum 1.
// Permutation: mean accuracy drop over n_repeats seeded shuffles of one
// column at a time. Results are sorted by descending score (ties by feature
// order).
RankedImportances feature_importance(const TreeModel& model, const Matrix& x,
                                     std::span<const int> y, ImportanceMethod method,
                                     int n_repeats, uint64_t seed,
                                     std::span<const std::string> names);
RankedImportances feature_importance(const BoostModel& model, const Matrix& x,
                                     std::span<const int> y, ImportanceMethod method,
                                     int n_repeats, uint64_t seed,
                                     std::span<const std::string> names);

// Generic backends used by both overloads.
RankedImportances rank_impurity(std::span<const double> raw_decreases,
                                std::span<const std::string> names);
RankedImportances rank_permutation(const std::function<double(std::span<const double>)>& predict,
                                   const Matrix& x, std::span<const int> y, int n_repeats,
                                   uint64_t seed, std::span<const std::string> names);

}  // namespace quip::models
