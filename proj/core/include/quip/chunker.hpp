#pragma once

#include <cstddef>
#include <set>
#include <string>
#include <vector>

#include "quip/postag.hpp"

namespace quip::chunker {

enum class ChunkKind { np, pp, vp };

struct Chunk {
  ChunkKind kind;
  size_t begin = 0;  // token span [begin, end)
  size_t end = 0;
  std::vector<Chunk> children;

  size_t length() const { return end - begin; }
};

struct ChunkTree {
  std::vector<Chunk> chunks;              // top-level, non-overlapping, ordered
  std::vector<size_t> sbar_positions;     // subordinating-conjunction token indices
  size_t sentence_len = 0;
};

// Subordinating conjunctions counted as SBAR markers. Loadable from a plain
// text file (one lowercase word per line, '#' comments).
class SubordinatorList {
 public:
  static SubordinatorList load(const std::string& path);
  static SubordinatorList builtin();

  bool contains(const std::string& lowercase_word) const {
    return words_.count(lowercase_word) != 0;
  }
  size_t size() const { return words_.size(); }

 private:
  std::set<std::string> words_;
};

// Cascaded longest-match shallow parse over PTB tags:
//   NP  := (DT|PRP$)? (JJ|JJR|JJS)* (NN|NNS|NNP|NNPS|PRP)+
//   PP  := (IN|TO) immediately followed by an NP (the NP becomes its child)
//   VP  := (MD)? (VB|VBD|VBG|VBN|VBP|VBZ)+ then a contiguous run of NP/PP
//          chunks, which become its children
// SBAR markers are tokens tagged IN or WDT whose lowercase form is in the
// subordinator list, independent of chunk membership.
ChunkTree chunk(const postag::TaggedSentence& sentence, const SubordinatorList& subordinators);

struct SseFeatures {
  int np_count = 0, vp_count = 0, pp_count = 0, sbar_count = 0;
  double lr_np = 0, lr_vp = 0, lr_pp = 0;
  double apl1_np = 0, apl1_vp = 0, apl1_pp = 0;
  double apl2_np = 0, apl2_vp = 0, apl2_pp = 0;
  double rp_nv = 0;
};

// Counts include nested chunks. lr_* and apl2_* are computed over maximal
// chunks of the kind (not contained in another chunk of the same kind);
// apl1_* over all chunks of the kind. Every 0/0 ratio is defined as 0.
SseFeatures sse_features(const ChunkTree& tree, size_t sentence_len);

}  // namespace quip::chunker
