#include "quip/chunker.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>

#include "quip/error.hpp"

namespace quip::chunker {

namespace {

const char* const kBuiltinSubordinators[] = {
    "after", "although", "as", "because", "before", "if", "once", "since",
    "so", "than", "that", "though", "unless", "until", "when", "whenever",
    "where", "whereas", "while", "whether",
};

bool is_det(const std::string& t) { return t == "DT" || t == "PRP$"; }
bool is_adj(const std::string& t) { return t == "JJ" || t == "JJR" || t == "JJS"; }
bool is_noun(const std::string& t) {
  return t == "NN" || t == "NNS" || t == "NNP" || t == "NNPS" || t == "PRP";
}
bool is_prep(const std::string& t) { return t == "IN" || t == "TO"; }
bool is_verb(const std::string& t) {
  return t == "VB" || t == "VBD" || t == "VBG" || t == "VBN" || t == "VBP" || t == "VBZ";
}

std::string lowercase(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (unsigned char c : s) out.push_back(static_cast<char>(std::tolower(c)));
  return out;
}

}  // namespace

SubordinatorList SubordinatorList::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ResourceError("chunker: cannot open subordinator list " + path);
  SubordinatorList list;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    auto last = line.find_last_not_of(" \t");
    list.words_.insert(lowercase(line.substr(first, last - first + 1)));
  }
  return list;
}

SubordinatorList SubordinatorList::builtin() {
  SubordinatorList list;
  for (const char* w : kBuiltinSubordinators) list.words_.insert(w);
  return list;
}

ChunkTree chunk(const postag::TaggedSentence& sentence, const SubordinatorList& subordinators) {
  const auto& tags = sentence.tags;
  const auto& tokens = sentence.tokens;
  if (tokens.size() != tags.size())
    throw ValueError("chunker: token/tag length mismatch");
  const size_t n = tags.size();

  ChunkTree tree;
  tree.sentence_len = n;
  if (n == 0) return tree;

  // Pass 1: noun phrases, longest match left to right.
  std::vector<Chunk> chunks;
  size_t i = 0;
  while (i < n) {
    size_t k = i;
    if (k < n && is_det(tags[k])) ++k;
    while (k < n && is_adj(tags[k])) ++k;
    size_t noun_start = k;
    while (k < n && is_noun(tags[k])) ++k;
    if (k > noun_start) {
      chunks.push_back({ChunkKind::np, i, k, {}});
      i = k;
    } else {
      ++i;
    }
  }

  // Pass 2: a preposition directly before an NP absorbs it into a PP.
  std::vector<Chunk> merged;
  for (size_t c = 0; c < chunks.size(); ++c) {
    const Chunk& np = chunks[c];
    size_t p = np.begin;
    bool prev_covers_prep = !merged.empty() && merged.back().end > p - 1;
    if (p > 0 && !prev_covers_prep && is_prep(tags[p - 1])) {
      Chunk pp{ChunkKind::pp, p - 1, np.end, {np}};
      merged.push_back(std::move(pp));
    } else {
      merged.push_back(np);
    }
  }
  chunks = std::move(merged);

  // Pass 3: verb groups absorb the contiguous chunk run that starts at their end.
  std::vector<Chunk> top;
  std::vector<bool> absorbed(chunks.size(), false);
  size_t next_chunk = 0;  // first chunk whose begin >= scan position
  i = 0;
  while (i < n) {
    while (next_chunk < chunks.size() && chunks[next_chunk].begin < i) ++next_chunk;
    bool in_chunk = next_chunk > 0 && chunks[next_chunk - 1].end > i;
    if (in_chunk) {
      ++i;
      continue;
    }
    size_t k = i;
    if (k < n && tags[k] == "MD") ++k;
    size_t verb_start = k;
    while (k < n && is_verb(tags[k])) ++k;
    if (k == verb_start) {
      ++i;
      continue;
    }
    Chunk vp{ChunkKind::vp, i, k, {}};
    size_t c = next_chunk;
    while (c < chunks.size() && chunks[c].begin == vp.end) {
      vp.end = chunks[c].end;
      vp.children.push_back(chunks[c]);
      absorbed[c] = true;
      ++c;
    }
    top.push_back(std::move(vp));
    i = k = top.back().end;
  }
  for (size_t c = 0; c < chunks.size(); ++c) {
    if (!absorbed[c]) top.push_back(chunks[c]);
  }
  std::sort(top.begin(), top.end(),
            [](const Chunk& a, const Chunk& b) { return a.begin < b.begin; });
  tree.chunks = std::move(top);

  for (size_t t = 0; t < n; ++t) {
    if ((tags[t] == "IN" || tags[t] == "WDT") && subordinators.contains(lowercase(tokens[t])))
      tree.sbar_positions.push_back(t);
  }
  return tree;
}

namespace {

void collect(const std::vector<Chunk>& chunks, std::vector<const Chunk*>& all) {
  for (const Chunk& c : chunks) {
    all.push_back(&c);
    collect(c.children, all);
  }
}

double ratio(double num, double den) { return den == 0.0 ? 0.0 : num / den; }

}  // namespace

SseFeatures sse_features(const ChunkTree& tree, size_t sentence_len) {
  SseFeatures f;
  if (sentence_len == 0) return f;

  std::vector<const Chunk*> all;
  collect(tree.chunks, all);

  // Maximal per kind: not properly contained in another chunk of the same kind.
  // The two-level cascade cannot nest a kind inside itself, but the definition
  // is applied literally so deeper grammars keep working.
  auto is_maximal = [&](const Chunk* c) {
    for (const Chunk* other : all) {
      if (other != c && other->kind == c->kind && other->begin <= c->begin &&
          c->end <= other->end && other->length() > c->length())
        return false;
    }
    return true;
  };

  struct KindStats {
    int count = 0;
    size_t total_len = 0;      // over all chunks of the kind
    int maximal_count = 0;
    size_t maximal_len = 0;    // over maximal chunks of the kind
  };
  KindStats np, pp, vp;
  auto stats_for = [&](ChunkKind k) -> KindStats& {
    switch (k) {
      case ChunkKind::np: return np;
      case ChunkKind::pp: return pp;
      default: return vp;
    }
  };
  for (const Chunk* c : all) {
    KindStats& s = stats_for(c->kind);
    s.count += 1;
    s.total_len += c->length();
    if (is_maximal(c)) {
      s.maximal_count += 1;
      s.maximal_len += c->length();
    }
  }

  f.np_count = np.count;
  f.vp_count = vp.count;
  f.pp_count = pp.count;
  f.sbar_count = static_cast<int>(tree.sbar_positions.size());

  const auto len = static_cast<double>(sentence_len);
  f.lr_np = ratio(static_cast<double>(np.maximal_len), len);
  f.lr_vp = ratio(static_cast<double>(vp.maximal_len), len);
  f.lr_pp = ratio(static_cast<double>(pp.maximal_len), len);

  f.apl1_np = ratio(static_cast<double>(np.total_len), np.count);
  f.apl1_vp = ratio(static_cast<double>(vp.total_len), vp.count);
  f.apl1_pp = ratio(static_cast<double>(pp.total_len), pp.count);
  f.apl2_np = ratio(static_cast<double>(np.maximal_len), np.maximal_count);
  f.apl2_vp = ratio(static_cast<double>(vp.maximal_len), vp.maximal_count);
  f.apl2_pp = ratio(static_cast<double>(pp.maximal_len), pp.maximal_count);

  // Mean over VPs that contain an NP/PP child of (mean child length / VP length).
  double sum = 0;
  int with_children = 0;
  for (const Chunk* c : all) {
    if (c->kind != ChunkKind::vp || c->children.empty()) continue;
    double child_len = 0;
    for (const Chunk& ch : c->children) child_len += static_cast<double>(ch.length());
    double mean_child = child_len / static_cast<double>(c->children.size());
    sum += ratio(mean_child, static_cast<double>(c->length()));
    with_children += 1;
  }
  f.rp_nv = ratio(sum, with_children);
  return f;
}

}  // namespace quip::chunker
