#include "quip/lemma.hpp"

#include <algorithm>
#include <array>
#include <utility>

namespace quip::lemma {

namespace {

struct Rule {
  std::string_view suffix;
  std::string_view replacement;
};

// Detachment rules as shipped with WordNet 3.0.
constexpr std::array<Rule, 8> kNounRules = {{
    {"s", ""}, {"ses", "s"}, {"xes", "x"}, {"zes", "z"},
    {"ches", "ch"}, {"shes", "sh"}, {"men", "man"}, {"ies", "y"},
}};
constexpr std::array<Rule, 8> kVerbRules = {{
    {"s", ""}, {"ies", "y"}, {"es", "e"}, {"es", ""},
    {"ed", "e"}, {"ed", ""}, {"ing", "e"}, {"ing", ""},
}};
constexpr std::array<Rule, 4> kAdjRules = {{
    {"er", ""}, {"est", ""}, {"er", "e"}, {"est", "e"},
}};

template <size_t N>
void apply(std::string_view word, const std::array<Rule, N>& rules,
           std::vector<std::string>& out) {
  for (const Rule& r : rules) {
    if (word.size() > r.suffix.size() && word.ends_with(r.suffix)) {
      std::string base(word.substr(0, word.size() - r.suffix.size()));
      base.append(r.replacement);
      if (base != word && std::find(out.begin(), out.end(), base) == out.end())
        out.push_back(std::move(base));
    }
  }
}

}  // namespace

std::vector<std::string> candidates(std::string_view word, Pos pos) {
  std::vector<std::string> out;
  switch (pos) {
    case Pos::noun: apply(word, kNounRules, out); break;
    case Pos::verb: apply(word, kVerbRules, out); break;
    case Pos::adj: apply(word, kAdjRules, out); break;
    case Pos::adv: break;  // no adverb detachment rules
  }
  return out;
}

std::vector<std::string> candidates_any(std::string_view word) {
  std::vector<std::string> out;
  apply(word, kNounRules, out);
  apply(word, kVerbRules, out);
  apply(word, kAdjRules, out);
  return out;
}

}  // namespace quip::lemma
