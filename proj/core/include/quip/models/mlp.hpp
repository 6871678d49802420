#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "quip/matrix.hpp"

namespace quip::models {

struct DenseLayer {
  Matrix w;                // out x in, row-major
  std::vector<double> b;   // out
};

struct MlpParams {
  int hand_hidden = 64;
  int hand_out = 104;
  int emb_hidden = 256;
  int emb_out = 104;
  int joint_hidden = 64;
  int epochs = 10;
  int batch_size = 64;
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  uint64_t seed = 0;
};

// Two-path fusion classifier: the hand-crafted features run through
// in->hand_hidden->hand_out, an optional precomputed-embedding path runs
// through d_emb->emb_hidden->emb_out, the concatenation feeds
// joint_hidden->1 with a sigmoid output. ReLU on all hidden layers; trained
// with mini-batch Adam on mean binary cross-entropy.
class MlpModel {
 public:
  // `embeddings` may be null for a hand-crafted-features-only model.
  static MlpModel train(const Matrix& x, const Matrix* embeddings, std::span<const int> y,
                        const MlpParams& params);

  double predict_proba(std::span<const double> x, std::span<const double> embedding = {}) const;

  size_t d_in() const { return d_in_; }
  size_t d_emb() const { return d_emb_; }
  bool has_embedding_path() const { return d_emb_ > 0; }
  const MlpParams& params() const { return params_; }

  // Mean BCE and its exact gradient on a batch, in flat parameter order.
  double batch_loss(const Matrix& x, const Matrix* embeddings, std::span<const int> y) const;
  std::vector<double> batch_gradient(const Matrix& x, const Matrix* embeddings,
                                     std::span<const int> y) const;

  std::vector<double> flat_parameters() const;
  void set_flat_parameters(std::span<const double> values);

  // Fresh seeded He-uniform initialization (exposed so gradient tests can
  // build an untrained instance).
  static MlpModel initialize(size_t d_in, size_t d_emb, const MlpParams& params);

  // Layers in flat order: hand1, hand2, [emb1, emb2,] joint, out.
  std::vector<const DenseLayer*> layers() const;
  std::vector<DenseLayer*> layers();

 private:
  DenseLayer hand1_, hand2_, emb1_, emb2_, joint_, out_;
  size_t d_in_ = 0;
  size_t d_emb_ = 0;
  MlpParams params_;

  struct Activations;
  void forward(std::span<const double> x, std::span<const double> emb, Activations& act) const;
  void accumulate_gradient(std::span<const double> x, std::span<const double> emb, int label,
                           double inv_batch, std::span<double> grad) const;

  friend class MlpSerializer;
};

}  // namespace quip::models
