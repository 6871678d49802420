#include "quip/wordnet.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <deque>
#include <fstream>
#include <sstream>

#include "quip/error.hpp"
#include "quip/lemma.hpp"

namespace quip::wordnet {

std::optional<Pos> pos_from_char(char c) {
  switch (c) {
    case 'n': return Pos::noun;
    case 'v': return Pos::verb;
    case 'a':
    case 's': return Pos::adj;  // satellites live in the adjective space
    case 'r': return Pos::adv;
    default: return std::nullopt;
  }
}

std::optional<Pos> pos_from_tag(std::string_view tag) {
  if (tag.starts_with("NN")) return Pos::noun;
  if (tag.starts_with("VB")) return Pos::verb;
  if (tag.starts_with("JJ")) return Pos::adj;
  if (tag.starts_with("RB")) return Pos::adv;
  return std::nullopt;
}

namespace {

lemma::Pos to_lemma_pos(Pos p) {
  switch (p) {
    case Pos::noun: return lemma::Pos::noun;
    case Pos::verb: return lemma::Pos::verb;
    case Pos::adj: return lemma::Pos::adj;
    default: return lemma::Pos::adv;
  }
}

std::string lowercase(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (unsigned char c : s) out.push_back(static_cast<char>(std::tolower(c)));
  return out;
}

std::vector<std::string> split_ws(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream in(line);
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

uint32_t parse_offset(const std::string& tok, const std::string& where) {
  uint32_t v = 0;
  auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v, 10);
  if (ec != std::errc{} || p != tok.data() + tok.size())
    throw ParseError("wordnet: bad synset offset '" + tok + "' " + where);
  return v;
}

long parse_int(const std::string& tok, int base, const std::string& where) {
  long v = 0;
  auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v, base);
  if (ec != std::errc{} || p != tok.data() + tok.size())
    throw ParseError("wordnet: bad count '" + tok + "' " + where);
  return v;
}

struct RawEdge {
  Pos from_pos;
  uint32_t from_offset;
  Pos to_pos;
  uint32_t to_offset;
};

constexpr const char* kPosNames[4] = {"noun", "verb", "adj", "adv"};

}  // namespace

Graph Graph::load(const std::string& dir) {
  Graph g;
  std::vector<RawEdge> edges;

  // data.{pos}: synsets and their hypernym pointers.
  for (int pi = 0; pi < 4; ++pi) {
    const Pos pos = static_cast<Pos>(pi);
    const std::string path = dir + "/data." + kPosNames[pi];
    std::ifstream in(path);
    if (!in) throw ResourceError("wordnet: cannot open " + path);

    PosGraph& pg = g.graphs_[pi];
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (line.empty() || line.rfind("  ", 0) == 0) continue;  // license header
      const std::string where = "at " + path + ":" + std::to_string(lineno);
      auto t = split_ws(line);
      if (t.size() < 6) throw ParseError("wordnet: malformed synset line " + where);

      uint32_t offset = parse_offset(t[0], where);
      auto ss_pos = pos_from_char(t[2].empty() ? '?' : t[2][0]);
      if (!ss_pos || *ss_pos != pos)
        throw ParseError("wordnet: unexpected ss_type '" + t[2] + "' " + where);

      long w_cnt = parse_int(t[3], 16, where);
      if (w_cnt < 1) throw ParseError("wordnet: synset with no words " + where);
      size_t at = 4 + 2 * static_cast<size_t>(w_cnt);
      if (t.size() <= at) throw ParseError("wordnet: truncated word list " + where);

      long p_cnt = parse_int(t[at], 10, where);
      if (p_cnt < 0 || t.size() < at + 1 + 4 * static_cast<size_t>(p_cnt))
        throw ParseError("wordnet: truncated pointer list " + where);

      auto [it, inserted] = pg.node_of.try_emplace(offset, static_cast<int32_t>(pg.offsets.size()));
      if (!inserted) throw ParseError("wordnet: duplicate synset offset " + where);
      pg.offsets.push_back(offset);

      for (long k = 0; k < p_cnt; ++k) {
        size_t base = at + 1 + 4 * static_cast<size_t>(k);
        const std::string& symbol = t[base];
        if (symbol != "@" && symbol != "@i") continue;
        uint32_t target = parse_offset(t[base + 1], where);
        auto target_pos = pos_from_char(t[base + 2].empty() ? '?' : t[base + 2][0]);
        if (!target_pos) throw ParseError("wordnet: bad pointer pos '" + t[base + 2] + "' " + where);
        edges.push_back({pos, offset, *target_pos, target});
      }
    }
    if (pg.offsets.empty()) throw ParseError("wordnet: no synsets found in " + path);
  }

  // Resolve hypernym pointers now that all synsets are known.
  for (int pi = 0; pi < 4; ++pi)
    g.graphs_[pi].hypernym_nodes.resize(g.graphs_[pi].offsets.size());
  for (const RawEdge& e : edges) {
    PosGraph& from_pg = g.graphs_[static_cast<size_t>(e.from_pos)];
    PosGraph& to_pg = g.graphs_[static_cast<size_t>(e.to_pos)];
    auto from_it = from_pg.node_of.find(e.from_offset);
    auto to_it = to_pg.node_of.find(e.to_offset);
    if (from_it == from_pg.node_of.end() || to_it == to_pg.node_of.end())
      throw ParseError("wordnet: hypernym pointer to missing synset " +
                       std::to_string(e.to_offset));
    // Hypernyms are same-POS by construction; ignore the rare cross-POS
    // pointer rather than corrupt the adjacency.
    if (e.from_pos != e.to_pos) continue;
    from_pg.hypernym_nodes[static_cast<size_t>(from_it->second)].push_back(to_it->second);
  }

  // index.{pos}: ordered lemma -> synset lists.
  for (int pi = 0; pi < 4; ++pi) {
    const Pos pos = static_cast<Pos>(pi);
    const std::string path = dir + "/index." + kPosNames[pi];
    std::ifstream in(path);
    if (!in) throw ResourceError("wordnet: cannot open " + path);

    PosGraph& pg = g.graphs_[pi];
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (line.empty() || line.rfind("  ", 0) == 0) continue;
      const std::string where = "at " + path + ":" + std::to_string(lineno);
      auto t = split_ws(line);
      if (t.size() < 6) throw ParseError("wordnet: malformed index line " + where);
      if (pos_from_char(t[1].empty() ? '?' : t[1][0]) != pos)
        throw ParseError("wordnet: unexpected index pos '" + t[1] + "' " + where);

      long synset_cnt = parse_int(t[2], 10, where);
      long p_cnt = parse_int(t[3], 10, where);
      size_t at = 4 + static_cast<size_t>(p_cnt) + 2;  // skip ptr symbols, sense_cnt, tagsense_cnt
      if (synset_cnt < 1 || t.size() < at + static_cast<size_t>(synset_cnt))
        throw ParseError("wordnet: truncated index line " + where);

      std::vector<int32_t> nodes;
      nodes.reserve(static_cast<size_t>(synset_cnt));
      for (long k = 0; k < synset_cnt; ++k) {
        uint32_t offset = parse_offset(t[at + static_cast<size_t>(k)], where);
        auto it = pg.node_of.find(offset);
        if (it == pg.node_of.end())
          throw ParseError("wordnet: index references missing synset " + where);
        nodes.push_back(it->second);
      }
      pg.lemma_index[t[0]] = std::move(nodes);
    }
  }

  // Optional morphy exception lists: "inflected base [base ...]".
  for (int pi = 0; pi < 4; ++pi) {
    const std::string path = dir + "/" + kPosNames[pi] + ".exc";
    std::ifstream in(path);
    if (!in) continue;
    PosGraph& pg = g.graphs_[pi];
    std::string line;
    while (std::getline(in, line)) {
      auto t = split_ws(line);
      if (t.size() < 2) continue;
      auto& bases = pg.exceptions[t[0]];
      bases.insert(bases.end(), t.begin() + 1, t.end());
    }
  }

  // Undirected adjacency with a virtual root joining every synset that has no
  // hypernym of its own.
  for (int pi = 0; pi < 4; ++pi) {
    PosGraph& pg = g.graphs_[pi];
    const auto n = static_cast<int32_t>(pg.offsets.size());
    pg.virtual_root = n;
    pg.node_count = n + 1;

    std::vector<int32_t> degree(static_cast<size_t>(pg.node_count), 0);
    auto count_edge = [&](int32_t u, int32_t v) {
      degree[static_cast<size_t>(u)]++;
      degree[static_cast<size_t>(v)]++;
    };
    for (int32_t u = 0; u < n; ++u) {
      for (int32_t v : pg.hypernym_nodes[static_cast<size_t>(u)]) count_edge(u, v);
      if (pg.hypernym_nodes[static_cast<size_t>(u)].empty()) count_edge(u, pg.virtual_root);
    }

    pg.adj_start.assign(static_cast<size_t>(pg.node_count) + 1, 0);
    for (int32_t u = 0; u < pg.node_count; ++u)
      pg.adj_start[static_cast<size_t>(u) + 1] = pg.adj_start[static_cast<size_t>(u)] + degree[static_cast<size_t>(u)];
    pg.adj_data.assign(static_cast<size_t>(pg.adj_start.back()), 0);

    std::vector<int32_t> fill(pg.adj_start.begin(), pg.adj_start.end() - 1);
    auto add_edge = [&](int32_t u, int32_t v) {
      pg.adj_data[static_cast<size_t>(fill[static_cast<size_t>(u)]++)] = v;
      pg.adj_data[static_cast<size_t>(fill[static_cast<size_t>(v)]++)] = u;
    };
    for (int32_t u = 0; u < n; ++u) {
      for (int32_t v : pg.hypernym_nodes[static_cast<size_t>(u)]) add_edge(u, v);
      if (pg.hypernym_nodes[static_cast<size_t>(u)].empty()) add_edge(u, pg.virtual_root);
    }
  }
  return g;
}

size_t Graph::synset_count(Pos pos) const { return pg(pos).offsets.size(); }

std::vector<SynsetId> Graph::senses(Pos pos, const std::string& lemma) const {
  const PosGraph& p = pg(pos);
  std::vector<SynsetId> out;
  auto it = p.lemma_index.find(lemma);
  if (it == p.lemma_index.end()) return out;
  out.reserve(it->second.size());
  for (int32_t node : it->second) out.push_back({pos, p.offsets[static_cast<size_t>(node)]});
  return out;
}

size_t Graph::sense_count(Pos pos, const std::string& lemma) const {
  const PosGraph& p = pg(pos);
  auto it = p.lemma_index.find(lemma);
  return it == p.lemma_index.end() ? 0 : it->second.size();
}

bool Graph::contains(SynsetId id) const {
  return pg(id.pos).node_of.count(id.offset) != 0;
}

int32_t Graph::node_or_throw(SynsetId id) const {
  const PosGraph& p = pg(id.pos);
  auto it = p.node_of.find(id.offset);
  if (it == p.node_of.end())
    throw ValueError("wordnet: unknown synset offset " + std::to_string(id.offset));
  return it->second;
}

std::vector<SynsetId> Graph::hypernyms(SynsetId id) const {
  const PosGraph& p = pg(id.pos);
  int32_t node = node_or_throw(id);
  std::vector<SynsetId> out;
  for (int32_t h : p.hypernym_nodes[static_cast<size_t>(node)])
    out.push_back({id.pos, p.offsets[static_cast<size_t>(h)]});
  return out;
}

std::vector<SynsetId> Graph::all_synsets(Pos pos) const {
  const PosGraph& p = pg(pos);
  std::vector<SynsetId> out;
  out.reserve(p.offsets.size());
  for (uint32_t off : p.offsets) out.push_back({pos, off});
  return out;
}

std::optional<std::string> Graph::lemmatize(Pos pos, const std::string& word) const {
  const PosGraph& p = pg(pos);
  std::string w = lowercase(word);
  if (p.lemma_index.count(w)) return w;
  if (auto it = p.exceptions.find(w); it != p.exceptions.end()) {
    for (const std::string& base : it->second) {
      if (p.lemma_index.count(base)) return base;
    }
  }
  for (const std::string& cand : lemma::candidates(w, to_lemma_pos(pos))) {
    if (p.lemma_index.count(cand)) return cand;
  }
  return std::nullopt;
}

std::optional<SynsetId> Graph::synset_by_name(const std::string& name) const {
  size_t d2 = name.rfind('.');
  if (d2 == std::string::npos || d2 + 1 >= name.size()) return std::nullopt;
  size_t d1 = name.rfind('.', d2 - 1);
  if (d1 == std::string::npos || d1 + 1 >= d2) return std::nullopt;
  auto pos = pos_from_char(name[d1 + 1]);
  if (!pos || d2 - d1 != 2) return std::nullopt;

  int sense = 0;
  auto [ptr, ec] = std::from_chars(name.data() + d2 + 1, name.data() + name.size(), sense);
  if (ec != std::errc{} || ptr != name.data() + name.size() || sense < 1) return std::nullopt;

  const PosGraph& p = pg(*pos);
  auto it = p.lemma_index.find(lowercase(name.substr(0, d1)));
  if (it == p.lemma_index.end() || static_cast<size_t>(sense) > it->second.size())
    return std::nullopt;
  int32_t node = it->second[static_cast<size_t>(sense - 1)];
  return SynsetId{*pos, p.offsets[static_cast<size_t>(node)]};
}

namespace {

// Reusable BFS buffers; one instance per external call.
struct BfsScratch {
  std::vector<int32_t> dist;
  std::vector<uint32_t> stamp;
  uint32_t epoch = 0;
  std::deque<int32_t> queue;

  void prepare(size_t nodes) {
    if (dist.size() < nodes) {
      dist.assign(nodes, -1);
      stamp.assign(nodes, 0);
    }
    ++epoch;
    queue.clear();
  }
  bool seen(int32_t u) const { return stamp[static_cast<size_t>(u)] == epoch; }
  void set(int32_t u, int32_t d) {
    stamp[static_cast<size_t>(u)] = epoch;
    dist[static_cast<size_t>(u)] = d;
  }
  int32_t get(int32_t u) const { return seen(u) ? dist[static_cast<size_t>(u)] : -1; }
};

// BFS from `source` until every target is reached (or the component is
// exhausted). Returns distances aligned with `targets`, -1 if unreachable.
void bfs_targets(const std::vector<int32_t>& adj_start, const std::vector<int32_t>& adj_data,
                 int32_t source, std::span<const int32_t> targets, BfsScratch& scratch,
                 std::vector<int32_t>& out) {
  scratch.prepare(adj_start.size() - 1);
  out.assign(targets.size(), -1);

  std::unordered_map<int32_t, std::vector<size_t>> wanted;
  size_t remaining = 0;
  for (size_t i = 0; i < targets.size(); ++i) {
    if (targets[i] == source) {
      out[i] = 0;
    } else {
      if (wanted[targets[i]].empty()) ++remaining;
      wanted[targets[i]].push_back(i);
    }
  }

  scratch.set(source, 0);
  scratch.queue.push_back(source);
  while (!scratch.queue.empty() && remaining > 0) {
    int32_t u = scratch.queue.front();
    scratch.queue.pop_front();
    int32_t du = scratch.get(u);
    for (int32_t k = adj_start[static_cast<size_t>(u)]; k < adj_start[static_cast<size_t>(u) + 1]; ++k) {
      int32_t v = adj_data[static_cast<size_t>(k)];
      if (scratch.seen(v)) continue;
      scratch.set(v, du + 1);
      if (auto it = wanted.find(v); it != wanted.end()) {
        for (size_t i : it->second) out[i] = du + 1;
        wanted.erase(it);
        if (--remaining == 0) return;
      }
      scratch.queue.push_back(v);
    }
  }
}

}  // namespace

std::optional<double> Graph::path_similarity(SynsetId a, SynsetId b) const {
  if (a.pos != b.pos) return std::nullopt;
  int32_t na = node_or_throw(a);
  int32_t nb = node_or_throw(b);
  if (na == nb) return 1.0;

  const PosGraph& p = pg(a.pos);
  BfsScratch scratch;
  std::vector<int32_t> dists;
  int32_t target[1] = {nb};
  bfs_targets(p.adj_start, p.adj_data, na, target, scratch, dists);
  if (dists[0] < 0) return std::nullopt;  // unreachable only in degenerate graphs
  return 1.0 / (1.0 + static_cast<double>(dists[0]));
}

AmbiguityFeatures ambiguity_features(const postag::TaggedSentence& sentence, const Graph& g,
                                     int sense_cap) {
  if (sense_cap < 1) throw ValueError("wordnet: sense_cap must be >= 1");

  struct QualifyingWord {
    Pos pos;
    std::vector<int32_t> sense_nodes;  // capped, node ids in the POS graph
  };

  AmbiguityFeatures f;
  std::vector<QualifyingWord> pair_words;  // noun/verb words for the pair search

  for (size_t i = 0; i < sentence.tokens.size(); ++i) {
    auto pos = pos_from_tag(sentence.tags[i]);
    if (!pos) continue;
    auto lemma = g.lemmatize(*pos, sentence.tokens[i]);
    if (!lemma) continue;
    const auto& index = g.graphs_[static_cast<size_t>(*pos)].lemma_index;
    const auto& nodes = index.at(*lemma);

    f.sense_combination += std::log(static_cast<double>(nodes.size()));

    if (*pos == Pos::noun || *pos == Pos::verb) {
      QualifyingWord w;
      w.pos = *pos;
      size_t cap = std::min(nodes.size(), static_cast<size_t>(sense_cap));
      w.sense_nodes.assign(nodes.begin(), nodes.begin() + static_cast<ptrdiff_t>(cap));
      pair_words.push_back(std::move(w));
    }
  }

  double farmost = -1.0, closest = 2.0;
  BfsScratch scratch;
  std::vector<int32_t> dists;
  for (size_t i = 0; i < pair_words.size(); ++i) {
    const auto& wi = pair_words[i];
    const Graph::PosGraph& p = g.graphs_[static_cast<size_t>(wi.pos)];
    for (int32_t src : wi.sense_nodes) {
      // One BFS per (word, sense) against the union of all later same-POS
      // words' senses keeps the per-sentence BFS count at words x cap.
      std::vector<int32_t> targets;
      std::vector<std::pair<size_t, size_t>> target_of;  // (word, sense) per target
      for (size_t j = i + 1; j < pair_words.size(); ++j) {
        if (pair_words[j].pos != wi.pos) continue;
        for (size_t s = 0; s < pair_words[j].sense_nodes.size(); ++s) {
          targets.push_back(pair_words[j].sense_nodes[s]);
          target_of.emplace_back(j, s);
        }
      }
      if (targets.empty()) continue;
      bfs_targets(p.adj_start, p.adj_data, src, targets, scratch, dists);
      for (size_t k = 0; k < targets.size(); ++k) {
        if (dists[k] < 0) continue;
        double sim = 1.0 / (1.0 + static_cast<double>(dists[k]));
        farmost = std::max(farmost, sim);
        closest = std::min(closest, sim);
      }
    }
  }
  if (farmost >= 0.0) {
    f.sense_farmost = farmost;
    f.sense_closest = closest;
  }
  return f;
}

}  // namespace quip::wordnet
