#include "quip/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "quip/csv.hpp"
#include "quip/error.hpp"

namespace quip::corpus {

namespace {

int parse_label(const std::string& raw) {
  std::string s;
  for (char c : raw) s.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  if (s == "0" || s == "false") return 0;
  if (s == "1" || s == "true") return 1;
  throw ValueError("corpus: non-binary label '" + raw + "'");
}

std::vector<std::vector<double>> load_embedding_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ResourceError("corpus: cannot open embedding file " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::vector<double> v;
    double x;
    while (ls >> x) v.push_back(x);
    if (!ls.eof()) {
      throw ParseError("corpus: bad value in embedding file " + path + " line " +
                       std::to_string(rows.size() + 1));
    }
    if (!rows.empty() && v.size() != rows.front().size()) {
      throw ValueError("corpus: embedding dimension mismatch at line " +
                       std::to_string(rows.size() + 1));
    }
    rows.push_back(std::move(v));
  }
  return rows;
}

}  // namespace

std::vector<Example> load_dataset(const std::string& path, const DatasetSchema& schema,
                                  const std::optional<std::string>& embedding_path) {
  auto rows = csv::read_file(path);
  if (rows.empty()) throw SchemaError("corpus: empty CSV " + path);

  const auto& header = rows.front();
  auto col_of = [&](const std::string& name) -> size_t {
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end())
      throw SchemaError("corpus: missing column '" + name + "' in " + path);
    return static_cast<size_t>(it - header.begin());
  };
  size_t text_col = col_of(schema.text_column);
  size_t label_col = col_of(schema.label_column);

  std::vector<Example> examples;
  examples.reserve(rows.size() - 1);
  for (size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.size() <= std::max(text_col, label_col)) {
      throw SchemaError("corpus: row " + std::to_string(r) + " has " +
                        std::to_string(row.size()) + " fields, expected at least " +
                        std::to_string(std::max(text_col, label_col) + 1));
    }
    Example ex;
    ex.id = static_cast<int64_t>(examples.size());
    ex.text = row[text_col];
    ex.label = parse_label(row[label_col]);
    examples.push_back(std::move(ex));
  }

  if (embedding_path) {
    auto vecs = load_embedding_file(*embedding_path);
    if (vecs.size() != examples.size()) {
      throw SchemaError("corpus: embedding row count " + std::to_string(vecs.size()) +
                        " does not match dataset row count " + std::to_string(examples.size()));
    }
    for (size_t i = 0; i < examples.size(); ++i) examples[i].embedding = std::move(vecs[i]);
  }
  return examples;
}

TokenizedText tokenize(std::string_view text) {
  static constexpr auto is_ascii_punct = [](unsigned char c) {
    return c < 0x80 && std::ispunct(c);
  };
  TokenizedText out;
  out.original.assign(text);
  std::string lower, orig;
  auto flush = [&] {
    if (!lower.empty()) {
      out.tokens.push_back(lower);
      out.original_tokens.push_back(orig);
      lower.clear();
      orig.clear();
    }
  };
  for (unsigned char c : text) {
    if (c < 0x80 && std::isspace(c)) {
      flush();
    } else if (is_ascii_punct(c)) {
      // dropped; does not split the token
    } else {
      orig.push_back(static_cast<char>(c));
      lower.push_back(static_cast<char>(c < 0x80 ? std::tolower(c) : c));
    }
  }
  flush();
  return out;
}

std::pair<std::vector<Example>, std::vector<Example>>
split(const std::vector<Example>& examples, double val_fraction, uint64_t seed) {
  if (examples.size() < 2) throw ValueError("corpus: split needs at least 2 examples");
  if (!(val_fraction > 0.0 && val_fraction < 1.0))
    throw ValueError("corpus: val_fraction must be in (0,1)");

  const size_t n = examples.size();
  std::vector<size_t> order(n);
  for (size_t i = 0; i < n; ++i) order[i] = i;
  // Explicit Fisher-Yates: identical sequence on every platform.
  std::mt19937_64 rng(seed);
  for (size_t i = n - 1; i > 0; --i) {
    size_t j = static_cast<size_t>(rng() % (i + 1));
    std::swap(order[i], order[j]);
  }

  auto n_val = static_cast<size_t>(std::llround(val_fraction * static_cast<double>(n)));
  n_val = std::clamp<size_t>(n_val, 1, n - 1);

  std::vector<Example> val, train;
  val.reserve(n_val);
  train.reserve(n - n_val);
  for (size_t i = 0; i < n; ++i) {
    (i < n_val ? val : train).push_back(examples[order[i]]);
  }
  return {std::move(train), std::move(val)};
}

}  // namespace quip::corpus
