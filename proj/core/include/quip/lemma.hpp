#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace quip::lemma {

enum class Pos { noun, verb, adj, adv };

// WordNet-style suffix detachment. Returns candidate base forms in rule
// order, without the input word itself and without duplicates. Callers
// validate candidates against whatever lexicon they are querying.
std::vector<std::string> candidates(std::string_view word, Pos pos);

// Union over noun, verb and adjective rules, order-stable and deduplicated.
std::vector<std::string> candidates_any(std::string_view word);

}  // namespace quip::lemma
