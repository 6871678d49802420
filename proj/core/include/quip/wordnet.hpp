#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "quip/postag.hpp"

namespace quip::wordnet {

enum class Pos : uint8_t { noun = 0, verb = 1, adj = 2, adv = 3 };

constexpr char pos_char(Pos p) {
  switch (p) {
    case Pos::noun: return 'n';
    case Pos::verb: return 'v';
    case Pos::adj: return 'a';
    default: return 'r';
  }
}
std::optional<Pos> pos_from_char(char c);
std::optional<Pos> pos_from_tag(std::string_view ptb_tag);

struct SynsetId {
  Pos pos;
  uint32_t offset;
  bool operator==(const SynsetId&) const = default;
};

struct AmbiguityFeatures;
class Graph;
// Qualifying words are tokens tagged NN*/VB*/JJ*/RB*, lemmatized per POS and
// present in the lemma index. All four POS enter sense_combination; only
// noun/verb words (same POS class, first `sense_cap` senses each) enter the
// farmost/closest pair search.
AmbiguityFeatures ambiguity_features(const postag::TaggedSentence& sentence, const Graph& g,
                                     int sense_cap = 8);

// WordNet 3.x database: synsets keyed by (pos, offset), ordered lemma index,
// hypernym adjacency ('@' and '@i' pointers) plus one virtual root per POS
// joining all root synsets so every same-POS pair has a finite path.
class Graph {
 public:
  // Requires index.{noun,verb,adj,adv} and data.{noun,verb,adj,adv}; picks up
  // {noun,verb,adj,adv}.exc exception lists when present.
  static Graph load(const std::string& dir);

  size_t synset_count(Pos pos) const;

  // Ordered senses of an exact lowercase lemma; empty when absent.
  std::vector<SynsetId> senses(Pos pos, const std::string& lemma) const;
  size_t sense_count(Pos pos, const std::string& lemma) const;

  // Morphy lemmatization: the word itself, then exception lists, then suffix
  // detachment, first form present in the lemma index.
  std::optional<std::string> lemmatize(Pos pos, const std::string& word) const;

  // "dog.n.01" style accessor (sense numbers are 1-based index positions).
  std::optional<SynsetId> synset_by_name(const std::string& name) const;

  bool contains(SynsetId id) const;
  std::vector<SynsetId> hypernyms(SynsetId id) const;
  std::vector<SynsetId> all_synsets(Pos pos) const;

  // 1 / (1 + L), L the shortest undirected hypernym-path length, passing
  // through the virtual root when needed. Cross-POS pairs yield nullopt.
  std::optional<double> path_similarity(SynsetId a, SynsetId b) const;

 private:
  struct PosGraph {
    std::vector<uint32_t> offsets;                       // node -> synset offset
    std::unordered_map<uint32_t, int32_t> node_of;       // offset -> node
    std::vector<std::vector<int32_t>> hypernym_nodes;    // directed, node -> parents
    // Undirected CSR adjacency; the last node is the virtual root.
    std::vector<int32_t> adj_start;
    std::vector<int32_t> adj_data;
    std::unordered_map<std::string, std::vector<int32_t>> lemma_index;
    std::unordered_map<std::string, std::vector<std::string>> exceptions;
    int32_t virtual_root = -1;
    int32_t node_count = 0;  // including the virtual root
  };

  const PosGraph& pg(Pos pos) const { return graphs_[static_cast<size_t>(pos)]; }
  int32_t node_or_throw(SynsetId id) const;

  PosGraph graphs_[4];

  friend AmbiguityFeatures ambiguity_features(const postag::TaggedSentence&, const Graph&, int);
};

struct AmbiguityFeatures {
  double sense_combination = 0;  // sum of ln(sense count) over qualifying words
  double sense_farmost = 0;      // max path similarity over cross-word sense pairs
  double sense_closest = 0;      // min path similarity over cross-word sense pairs
};

}  // namespace quip::wordnet
