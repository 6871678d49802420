#pragma once

#include <array>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>

namespace quip::emolex {

// Dimension order is fixed; every feature schema and model file depends on it.
inline constexpr std::array<std::string_view, 10> kEmotionNames = {
    "fear", "anger", "anticipation", "trust", "surprise",
    "positive", "negative", "sadness", "disgust", "joy",
};

using EmotionVector = std::array<int, 10>;

// NRC word-emotion association lexicon, parsed from the TSV distribution
// format: word<TAB>emotion<TAB>0|1, one association per line.
class Lexicon {
 public:
  static Lexicon load(const std::string& path);

  // Exact lookup of a lowercase surface form.
  const EmotionVector* find(const std::string& word) const;
  // Surface form first, then suffix-detachment candidates.
  const EmotionVector* find_with_lemma(const std::string& word) const;

  size_t size() const { return table_.size(); }
  void insert(const std::string& word, const EmotionVector& v) { table_[word] = v; }

 private:
  std::unordered_map<std::string, EmotionVector> table_;
};

// Elementwise sum of per-token association vectors; out-of-lexicon tokens
// contribute zero.
EmotionVector emotion_features(std::span<const std::string> tokens, const Lexicon& lexicon);

}  // namespace quip::emolex
