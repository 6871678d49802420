#include "quip/emolex.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>

#include "quip/error.hpp"
#include "quip/lemma.hpp"

namespace quip::emolex {

namespace {

int emotion_index(std::string_view name) {
  for (size_t i = 0; i < kEmotionNames.size(); ++i) {
    if (kEmotionNames[i] == name) return static_cast<int>(i);
  }
  return -1;
}

}  // namespace

Lexicon Lexicon::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ResourceError("emolex: cannot open " + path);

  Lexicon lex;
  // Tracks which (word, emotion) pairs were already assigned, to warn on
  // genuine duplicates (the format carries ten distinct emotion lines per word).
  std::unordered_map<std::string, uint16_t> seen;
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;

    size_t t1 = line.find('\t');
    size_t t2 = t1 == std::string::npos ? std::string::npos : line.find('\t', t1 + 1);
    if (t2 == std::string::npos)
      throw ParseError("emolex: malformed line " + std::to_string(lineno) + " in " + path);
    std::string word = line.substr(0, t1);
    std::string emotion = line.substr(t1 + 1, t2 - t1 - 1);
    std::string flag = line.substr(t2 + 1);

    int idx = emotion_index(emotion);
    if (idx < 0)
      throw ParseError("emolex: unknown emotion '" + emotion + "' at line " +
                       std::to_string(lineno) + " in " + path);
    if (flag != "0" && flag != "1")
      throw ParseError("emolex: flag must be 0 or 1 at line " + std::to_string(lineno) +
                       " in " + path);

    uint16_t bit = static_cast<uint16_t>(1u << idx);
    uint16_t& mask = seen[word];
    if (mask & bit) {
      std::cerr << "emolex: warning: duplicate entry for '" << word << "'/" << emotion
                << " at line " << lineno << ", last occurrence wins\n";
    }
    mask |= bit;
    lex.table_[word][idx] = flag == "1" ? 1 : 0;
  }
  return lex;
}

const EmotionVector* Lexicon::find(const std::string& word) const {
  auto it = table_.find(word);
  return it == table_.end() ? nullptr : &it->second;
}

const EmotionVector* Lexicon::find_with_lemma(const std::string& word) const {
  if (const EmotionVector* v = find(word)) return v;
  for (const std::string& cand : lemma::candidates_any(word)) {
    if (const EmotionVector* v = find(cand)) return v;
  }
  return nullptr;
}

EmotionVector emotion_features(std::span<const std::string> tokens, const Lexicon& lexicon) {
  EmotionVector sum{};
  for (const std::string& tok : tokens) {
    if (const EmotionVector* v = lexicon.find_with_lemma(tok)) {
      for (size_t i = 0; i < sum.size(); ++i) sum[i] += (*v)[i];
    }
  }
  return sum;
}

}  // namespace quip::emolex
