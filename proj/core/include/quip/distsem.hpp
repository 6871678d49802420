#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "quip/postag.hpp"

namespace quip::distsem {

enum class EmbeddingFormat { text, binary };

// Pretrained word-vector table. Text format: header "count dim", then one
// "word v1 .. vd" line per entry. Binary format: the word2vec layout — ASCII
// header line, then per word a space-terminated word followed by dim
// little-endian float32 values. Zero-norm vectors are dropped at load.
class EmbeddingTable {
 public:
  static EmbeddingTable load(const std::string& path, EmbeddingFormat format);

  const std::vector<float>* find(const std::string& word) const;
  size_t dim() const { return dim_; }
  size_t size() const { return table_.size(); }

  void insert(const std::string& word, std::vector<float> v);

 private:
  std::unordered_map<std::string, std::vector<float>> table_;
  size_t dim_ = 0;
};

struct IncongruityFeatures {
  double disconnection = 0;  // max pairwise cosine distance between content words
  double repetition = 0;     // min pairwise cosine distance between content words
};

// Content words are tokens tagged NN*/VB*/JJ*/RB* whose lowercase surface form
// is in the table. Distance is 1 - cosine; fewer than two qualifying word
// positions yields (0, 0).
IncongruityFeatures incongruity(const postag::TaggedSentence& sentence,
                                const EmbeddingTable& table);

// 1 - cosine(u, v), clamped into [0, 2].
double cosine_distance(const std::vector<float>& u, const std::vector<float>& v);

}  // namespace quip::distsem
