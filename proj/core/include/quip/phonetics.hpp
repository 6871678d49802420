#pragma once

#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace quip::phonetics {

using Pronunciation = std::vector<std::string>;  // ARPABET phonemes, stress digits retained

// CMU Pronouncing Dictionary. ";;;" lines are comments; "WORD(1)" variants are
// grouped under the base word in file order. Lookup is case-insensitive.
class PronLexicon {
 public:
  static PronLexicon load(const std::string& path);

  const std::vector<Pronunciation>* find(const std::string& word) const;
  size_t size() const { return table_.size(); }

  void insert(const std::string& word, Pronunciation pron);
  std::vector<std::string> words() const;

 private:
  std::unordered_map<std::string, std::vector<Pronunciation>> table_;
};

struct PhoneticFeatures {
  int allit_count = 0;
  int allit_max_len = 0;  // 0 or >= 2
  int rhyme_count = 0;
  int rhyme_max_len = 0;  // 0 or >= 2
};

// Chains are maximal runs of >= 2 consecutive in-lexicon tokens with equal
// keys; out-of-lexicon tokens are transparent (skipped without breaking the
// run). Alliteration key: first phoneme of the first pronunciation. Rhyme key:
// the rime (last stressed-or-unstressed vowel through the end) of the first
// pronunciation. Stress digits are stripped from both keys.
PhoneticFeatures phonetic_features(std::span<const std::string> tokens, const PronLexicon& lex);

// Key helpers, exposed for tests.
std::string alliteration_key(const Pronunciation& pron);
std::string rhyme_key(const Pronunciation& pron);

}  // namespace quip::phonetics
