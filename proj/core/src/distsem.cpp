#include "quip/distsem.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iostream>
#include <sstream>

#include "quip/error.hpp"

namespace quip::distsem {

namespace {

bool zero_norm(const std::vector<float>& v) {
  for (float x : v) {
    if (x != 0.0f) return false;
  }
  return true;
}

void check_finite(const std::vector<float>& v, const std::string& word) {
  for (float x : v) {
    if (!std::isfinite(x))
      throw ParseError("distsem: non-finite value in vector for '" + word + "'");
  }
}

EmbeddingTable load_text(std::istream& in, const std::string& path) {
  size_t count = 0, dim = 0;
  {
    std::string header;
    if (!std::getline(in, header))
      throw ParseError("distsem: missing header in " + path);
    std::istringstream hs(header);
    if (!(hs >> count >> dim) || dim == 0)
      throw ParseError("distsem: bad header '" + header + "' in " + path);
  }
  EmbeddingTable table;
  std::string line;
  size_t rows = 0;
  while (rows < count) {
    if (!std::getline(in, line))
      throw ParseError("distsem: " + path + " truncated after " + std::to_string(rows) +
                       " of " + std::to_string(count) + " rows");
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string word;
    ls >> word;
    std::vector<float> v;
    v.reserve(dim);
    float x;
    while (ls >> x) v.push_back(x);
    if (v.size() != dim)
      throw ParseError("distsem: row for '" + word + "' has " + std::to_string(v.size()) +
                       " values, expected " + std::to_string(dim) + " in " + path);
    check_finite(v, word);
    ++rows;
    if (zero_norm(v)) {
      std::cerr << "distsem: warning: dropping zero vector for '" << word << "'\n";
      continue;
    }
    table.insert(word, std::move(v));
  }
  return table;
}

EmbeddingTable load_binary(std::istream& in, const std::string& path) {
  size_t count = 0, dim = 0;
  {
    std::string header;
    if (!std::getline(in, header))
      throw ParseError("distsem: missing header in " + path);
    std::istringstream hs(header);
    if (!(hs >> count >> dim) || dim == 0)
      throw ParseError("distsem: bad header '" + header + "' in " + path);
  }
  EmbeddingTable table;
  for (size_t r = 0; r < count; ++r) {
    std::string word;
    char c;
    // Word is space-terminated; writers differ on newlines around entries.
    while (in.get(c) && c != ' ') {
      if (c != '\n' && c != '\r') word.push_back(c);
    }
    if (!in)
      throw ParseError("distsem: " + path + " truncated in word " + std::to_string(r));
    std::vector<float> v(dim);
    in.read(reinterpret_cast<char*>(v.data()), static_cast<std::streamsize>(dim * sizeof(float)));
    if (in.gcount() != static_cast<std::streamsize>(dim * sizeof(float)))
      throw ParseError("distsem: " + path + " truncated in vector for '" + word + "'");
    check_finite(v, word);
    if (zero_norm(v)) {
      std::cerr << "distsem: warning: dropping zero vector for '" << word << "'\n";
      continue;
    }
    table.insert(word, std::move(v));
  }
  return table;
}

}  // namespace

void EmbeddingTable::insert(const std::string& word, std::vector<float> v) {
  if (dim_ == 0) dim_ = v.size();
  if (v.size() != dim_)
    throw ValueError("distsem: vector for '" + word + "' has dimension " +
                     std::to_string(v.size()) + ", table has " + std::to_string(dim_));
  table_[word] = std::move(v);
}

EmbeddingTable EmbeddingTable::load(const std::string& path, EmbeddingFormat format) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ResourceError("distsem: cannot open embeddings " + path);
  return format == EmbeddingFormat::text ? load_text(in, path) : load_binary(in, path);
}

const std::vector<float>* EmbeddingTable::find(const std::string& word) const {
  auto it = table_.find(word);
  return it == table_.end() ? nullptr : &it->second;
}

double cosine_distance(const std::vector<float>& u, const std::vector<float>& v) {
  double dot = 0, nu = 0, nv = 0;
  for (size_t i = 0; i < u.size(); ++i) {
    dot += static_cast<double>(u[i]) * v[i];
    nu += static_cast<double>(u[i]) * u[i];
    nv += static_cast<double>(v[i]) * v[i];
  }
  double cosine = dot / (std::sqrt(nu) * std::sqrt(nv));
  cosine = std::clamp(cosine, -1.0, 1.0);
  return 1.0 - cosine;
}

namespace {

bool content_tag(const std::string& tag) {
  return tag.starts_with("NN") || tag.starts_with("VB") || tag.starts_with("JJ") ||
         tag.starts_with("RB");
}

}  // namespace

IncongruityFeatures incongruity(const postag::TaggedSentence& sentence,
                                const EmbeddingTable& table) {
  std::vector<const std::vector<float>*> vecs;
  for (size_t i = 0; i < sentence.tokens.size(); ++i) {
    if (!content_tag(sentence.tags[i])) continue;
    if (const auto* v = table.find(sentence.tokens[i])) vecs.push_back(v);
  }
  IncongruityFeatures f;
  if (vecs.size() < 2) return f;

  double max_d = 0, min_d = 2.0;
  for (size_t i = 0; i < vecs.size(); ++i) {
    for (size_t j = i + 1; j < vecs.size(); ++j) {
      double d = cosine_distance(*vecs[i], *vecs[j]);
      max_d = std::max(max_d, d);
      min_d = std::min(min_d, d);
    }
  }
  f.disconnection = max_d;
  f.repetition = min_d;
  return f;
}

}  // namespace quip::distsem
