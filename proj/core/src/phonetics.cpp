#include "quip/phonetics.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "quip/error.hpp"

namespace quip::phonetics {

namespace {

std::string lowercase(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (unsigned char c : s) out.push_back(static_cast<char>(std::tolower(c)));
  return out;
}

std::string strip_stress(const std::string& phoneme) {
  std::string out = phoneme;
  while (!out.empty() && std::isdigit(static_cast<unsigned char>(out.back()))) out.pop_back();
  return out;
}

bool is_vowel(const std::string& phoneme) {
  return !phoneme.empty() && std::isdigit(static_cast<unsigned char>(phoneme.back()));
}

}  // namespace

PronLexicon PronLexicon::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ResourceError("phonetics: cannot open cmudict " + path);

  PronLexicon lex;
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.rfind(";;;", 0) == 0) continue;

    std::istringstream ls(line);
    std::string word;
    ls >> word;
    Pronunciation pron;
    std::string ph;
    while (ls >> ph) pron.push_back(ph);
    if (pron.empty())
      throw ParseError("phonetics: entry with no phonemes at line " + std::to_string(lineno) +
                       " in " + path);

    // "WORD(1)" marks an alternative pronunciation of WORD.
    if (word.size() > 3 && word.back() == ')') {
      size_t open = word.rfind('(');
      if (open != std::string::npos && open + 1 < word.size() - 1) {
        bool digits = true;
        for (size_t i = open + 1; i + 1 < word.size(); ++i) {
          if (!std::isdigit(static_cast<unsigned char>(word[i]))) digits = false;
        }
        if (digits) word.resize(open);
      }
    }
    lex.insert(lowercase(word), std::move(pron));
  }
  return lex;
}

void PronLexicon::insert(const std::string& word, Pronunciation pron) {
  table_[lowercase(word)].push_back(std::move(pron));
}

const std::vector<Pronunciation>* PronLexicon::find(const std::string& word) const {
  auto it = table_.find(lowercase(word));
  return it == table_.end() ? nullptr : &it->second;
}

std::vector<std::string> PronLexicon::words() const {
  std::vector<std::string> out;
  out.reserve(table_.size());
  for (const auto& [w, _] : table_) out.push_back(w);
  std::sort(out.begin(), out.end());
  return out;
}

std::string alliteration_key(const Pronunciation& pron) {
  return strip_stress(pron.front());
}

std::string rhyme_key(const Pronunciation& pron) {
  size_t last_vowel = pron.size();
  for (size_t i = pron.size(); i-- > 0;) {
    if (is_vowel(pron[i])) {
      last_vowel = i;
      break;
    }
  }
  // No vowel at all: the whole pronunciation serves as the rime.
  size_t start = last_vowel == pron.size() ? 0 : last_vowel;
  std::string key;
  for (size_t i = start; i < pron.size(); ++i) {
    if (i > start) key.push_back(' ');
    key += strip_stress(pron[i]);
  }
  return key;
}

namespace {

struct ChainStats {
  int count = 0;
  int max_len = 0;
};

// Maximal runs of equal keys over the qualifying subsequence.
ChainStats chains(const std::vector<std::string>& keys) {
  ChainStats s;
  size_t i = 0;
  while (i < keys.size()) {
    size_t j = i + 1;
    while (j < keys.size() && keys[j] == keys[i]) ++j;
    auto run = static_cast<int>(j - i);
    if (run >= 2) {
      s.count += 1;
      s.max_len = std::max(s.max_len, run);
    }
    i = j;
  }
  return s;
}

}  // namespace

PhoneticFeatures phonetic_features(std::span<const std::string> tokens, const PronLexicon& lex) {
  std::vector<std::string> allit_keys, rhyme_keys;
  for (const std::string& tok : tokens) {
    const auto* prons = lex.find(tok);
    if (!prons || prons->empty()) continue;  // OOV tokens are transparent
    const Pronunciation& first = prons->front();
    allit_keys.push_back(alliteration_key(first));
    rhyme_keys.push_back(rhyme_key(first));
  }
  ChainStats a = chains(allit_keys);
  ChainStats r = chains(rhyme_keys);
  return {a.count, a.max_len, r.count, r.max_len};
}

}  // namespace quip::phonetics
