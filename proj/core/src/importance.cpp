#include "quip/models/importance.hpp"

#include <algorithm>
#include <numeric>
#include <random>

#include "quip/error.hpp"
#include "quip/models/metrics.hpp"

namespace quip::models {

ImportanceMethod importance_method_from_string(const std::string& name) {
  if (name == "impurity") return ImportanceMethod::impurity;
  if (name == "permutation") return ImportanceMethod::permutation;
  throw ConfigError("models: unknown importance method '" + name + "'");
}

namespace {

RankedImportances sort_ranked(std::vector<std::pair<std::string, double>> scored) {
  std::stable_sort(scored.begin(), scored.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  return scored;
}

uint64_t derive_seed(uint64_t seed, uint64_t repeat) {
  // splitmix64 step keeps per-repeat streams independent of execution order.
  uint64_t z = seed + (repeat + 1) * 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double accuracy_of(const std::function<double(std::span<const double>)>& predict,
                   const Matrix& x, std::span<const int> y) {
  size_t correct = 0;
  for (size_t i = 0; i < x.rows; ++i) {
    const bool pred = predict(x.row(i)) >= 0.5;
    if (pred == (y[i] != 0)) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(x.rows);
}

void check_names(size_t n_features, std::span<const std::string> names) {
  if (names.size() != n_features)
    throw SchemaError("models: importance needs " + std::to_string(n_features) +
                      " feature names, got " + std::to_string(names.size()));
}

}  // namespace

RankedImportances rank_impurity(std::span<const double> raw_decreases,
                                std::span<const std::string> names) {
  check_names(raw_decreases.size(), names);
  double total = std::accumulate(raw_decreases.begin(), raw_decreases.end(), 0.0);
  std::vector<std::pair<std::string, double>> scored;
  scored.reserve(names.size());
  for (size_t f = 0; f < names.size(); ++f)
    scored.emplace_back(names[f], total > 0 ? raw_decreases[f] / total : 0.0);
  return sort_ranked(std::move(scored));
}

RankedImportances rank_permutation(const std::function<double(std::span<const double>)>& predict,
                                   const Matrix& x, std::span<const int> y, int n_repeats,
                                   uint64_t seed, std::span<const std::string> names) {
  check_names(x.cols, names);
  if (n_repeats < 1) throw ValueError("models: n_repeats must be >= 1");
  if (x.rows == 0 || x.rows != y.size())
    throw ValueError("models: permutation importance needs non-empty aligned data");

  const double base = accuracy_of(predict, x, y);
  std::vector<double> drops(x.cols, 0.0);

  std::vector<double> saved(x.rows);
  Matrix work = x;
  for (int rep = 0; rep < n_repeats; ++rep) {
    std::mt19937_64 rng(derive_seed(seed, static_cast<uint64_t>(rep)));
    for (size_t f = 0; f < x.cols; ++f) {
      for (size_t r = 0; r < x.rows; ++r) saved[r] = work.at(r, f);
      // Fisher-Yates on the column.
      for (size_t r = x.rows - 1; r > 0; --r) {
        size_t j = static_cast<size_t>(rng() % (r + 1));
        std::swap(work.at(r, f), work.at(j, f));
      }
      drops[f] += base - accuracy_of(predict, work, y);
      for (size_t r = 0; r < x.rows; ++r) work.at(r, f) = saved[r];
    }
  }

  std::vector<std::pair<std::string, double>> scored;
  scored.reserve(x.cols);
  for (size_t f = 0; f < x.cols; ++f)
    scored.emplace_back(names[f], drops[f] / static_cast<double>(n_repeats));
  return sort_ranked(std::move(scored));
}

namespace {

template <typename Model>
RankedImportances importance_impl(const Model& model, const Matrix& x, std::span<const int> y,
                                  ImportanceMethod method, int n_repeats, uint64_t seed,
                                  std::span<const std::string> names) {
  if (method == ImportanceMethod::impurity) {
    return rank_impurity(model.impurity_decreases(), names);
  }
  auto predict = [&model](std::span<const double> row) { return model.predict_proba(row); };
  return rank_permutation(predict, x, y, n_repeats, seed, names);
}

}  // namespace

RankedImportances feature_importance(const TreeModel& model, const Matrix& x,
                                     std::span<const int> y, ImportanceMethod method,
                                     int n_repeats, uint64_t seed,
                                     std::span<const std::string> names) {
  return importance_impl(model, x, y, method, n_repeats, seed, names);
}

RankedImportances feature_importance(const BoostModel& model, const Matrix& x,
                                     std::span<const int> y, ImportanceMethod method,
                                     int n_repeats, uint64_t seed,
                                     std::span<const std::string> names) {
  return importance_impl(model, x, y, method, n_repeats, seed, names);
}

}  // namespace quip::models
