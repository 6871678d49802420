#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "quip/matrix.hpp"
#include "quip/models/boost.hpp"
#include "quip/models/mlp.hpp"
#include "quip/models/tree.hpp"

namespace quip::models {

// Column-wise z-score transform fit on training data and stored with the
// model so evaluation applies the identical mapping.
struct Standardizer {
  std::vector<double> mean;
  std::vector<double> stddev;  // zero-variance columns keep stddev 1

  static Standardizer fit(const Matrix& x);
  void apply(Matrix& x) const;
};

// Self-describing model file: type, hyperparameters, feature-name schema and
// parameters, serialized as canonical JSON (sorted keys, round-trip floats).
struct ModelFile {
  std::string type;  // "tree" | "boost" | "mlp"
  std::vector<std::string> feature_names;
  std::string feature_group = "combined";
  uint64_t seed = 0;
  std::optional<Standardizer> standardizer;
  std::variant<TreeModel, BoostModel, MlpModel> model;
};

void save_model(const std::string& path, const ModelFile& file);
ModelFile load_model(const std::string& path);

}  // namespace quip::models
