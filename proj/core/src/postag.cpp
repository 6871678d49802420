#include "quip/postag.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "quip/error.hpp"

namespace quip::postag {

namespace {

constexpr std::string_view kStartTag = "-START-";
constexpr std::string_view kStart2Tag = "-START2-";
constexpr std::string_view kPadWord = "-PAD-";

std::string normalize(const std::string& word) {
  bool has_digit = false;
  for (unsigned char c : word) {
    if (std::isdigit(c)) has_digit = true;
  }
  if (has_digit && word.size() == 4) return "!YEAR";
  if (has_digit) return "!DIGITS";
  std::string lower;
  lower.reserve(word.size());
  for (unsigned char c : word) lower.push_back(static_cast<char>(std::tolower(c)));
  return lower;
}

std::string suffix(const std::string& word, size_t n) {
  return word.size() <= n ? word : word.substr(word.size() - n);
}

std::string shape(const std::string& word) {
  std::string s = "sh=";
  if (!word.empty() && std::isupper(static_cast<unsigned char>(word[0]))) s += 'U';
  for (unsigned char c : word) {
    if (std::isdigit(c)) {
      s += 'd';
      break;
    }
  }
  if (word.find('-') != std::string::npos) s += 'h';
  return s;
}

// Feature extraction for position i. `words` are the original tokens padded
// conceptually with -PAD- at both ends; `norm` the normalized forms.
std::vector<std::string> token_features(const std::vector<std::string>& words,
                                        const std::vector<std::string>& norm, size_t i,
                                        std::string_view prev_tag, std::string_view prev2_tag) {
  auto word_at = [&](ptrdiff_t k) -> const std::string& {
    static const std::string pad{kPadWord};
    if (k < 0 || k >= static_cast<ptrdiff_t>(words.size())) return pad;
    return words[static_cast<size_t>(k)];
  };
  auto norm_at = [&](ptrdiff_t k) -> const std::string& {
    static const std::string pad{kPadWord};
    if (k < 0 || k >= static_cast<ptrdiff_t>(norm.size())) return pad;
    return norm[static_cast<size_t>(k)];
  };
  const ptrdiff_t p = static_cast<ptrdiff_t>(i);
  const std::string& w = words[i];

  std::vector<std::string> f;
  f.reserve(16);
  f.emplace_back("b");
  f.push_back("w=" + norm_at(p));
  f.push_back("s1=" + suffix(norm_at(p), 1));
  f.push_back("s2=" + suffix(norm_at(p), 2));
  f.push_back("s3=" + suffix(norm_at(p), 3));
  f.push_back("p1=" + (w.empty() ? std::string() : std::string(1, w[0])));
  f.push_back(shape(w));
  f.push_back("t-1=" + std::string(prev_tag));
  f.push_back("t-2=" + std::string(prev2_tag));
  f.push_back("t-1t-2=" + std::string(prev_tag) + "|" + std::string(prev2_tag));
  f.push_back("t-1w=" + std::string(prev_tag) + "|" + norm_at(p));
  f.push_back("w-1=" + norm_at(p - 1));
  f.push_back("s3-1=" + suffix(norm_at(p - 1), 3));
  f.push_back("w-2=" + norm_at(p - 2));
  f.push_back("w+1=" + norm_at(p + 1));
  f.push_back("s3+1=" + suffix(norm_at(p + 1), 3));
  f.push_back("w+2=" + norm_at(p + 2));
  return f;
}

std::vector<std::string> normalize_all(const std::vector<std::string>& words) {
  std::vector<std::string> out;
  out.reserve(words.size());
  for (const auto& w : words) out.push_back(normalize(w));
  return out;
}

}  // namespace

// Training-time bookkeeping for weight averaging: each feature/tag cell keeps its
// running total and the step of its last update, so the average over all steps
// can be recovered at the end without touching every cell every step.
struct TaggerTrainer {
  struct Cell {
    double weight = 0;
    double total = 0;
    uint64_t stamp = 0;
  };

  std::unordered_map<std::string, std::vector<Cell>> cells;
  size_t n_tags = 0;
  uint64_t step = 0;

  std::vector<Cell>& row(const std::string& feat) {
    auto [it, inserted] = cells.try_emplace(feat);
    if (inserted) it->second.resize(n_tags);
    return it->second;
  }

  int best_tag(const std::vector<std::string>& feats) const {
    std::vector<double> score(n_tags, 0.0);
    for (const auto& f : feats) {
      auto it = cells.find(f);
      if (it == cells.end()) continue;
      for (size_t t = 0; t < n_tags; ++t) score[t] += it->second[t].weight;
    }
    int best = 0;
    for (size_t t = 1; t < n_tags; ++t) {
      if (score[t] > score[best]) best = static_cast<int>(t);
    }
    return best;
  }

  void bump(Cell& c, double delta) {
    c.total += c.weight * static_cast<double>(step - c.stamp);
    c.stamp = step;
    c.weight += delta;
  }

  void update(const std::vector<std::string>& feats, int gold, int pred) {
    if (gold == pred) return;
    for (const auto& f : feats) {
      auto& r = row(f);
      bump(r[static_cast<size_t>(gold)], 1.0);
      bump(r[static_cast<size_t>(pred)], -1.0);
    }
  }

  double averaged(const Cell& c) const {
    if (step == 0) return 0.0;
    double total = c.total + c.weight * static_cast<double>(step - c.stamp);
    return total / static_cast<double>(step);
  }
};

Tagger Tagger::train(const std::vector<TaggedSentence>& corpus, int epochs, uint64_t seed) {
  if (corpus.empty()) throw ValueError("postag: training corpus is empty");
  if (epochs < 1) throw ValueError("postag: epochs must be >= 1");
  for (const auto& s : corpus) {
    if (s.tokens.size() != s.tags.size())
      throw ValueError("postag: token/tag length mismatch in training corpus");
  }

  std::set<std::string> tagset;
  for (const auto& s : corpus) tagset.insert(s.tags.begin(), s.tags.end());

  Tagger model;
  model.tags_.assign(tagset.begin(), tagset.end());

  std::unordered_map<std::string, int> tag_id;
  for (size_t t = 0; t < model.tags_.size(); ++t) tag_id[model.tags_[t]] = static_cast<int>(t);

  TaggerTrainer tr;
  tr.n_tags = model.tags_.size();

  std::vector<size_t> order(corpus.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::mt19937_64 rng(seed);

  for (int e = 0; e < epochs; ++e) {
    for (size_t i = order.size() - 1; i > 0; --i) {
      size_t j = static_cast<size_t>(rng() % (i + 1));
      std::swap(order[i], order[j]);
    }
    for (size_t si : order) {
      const TaggedSentence& sent = corpus[si];
      auto norm = normalize_all(sent.tokens);
      std::string prev{kStartTag}, prev2{kStart2Tag};
      for (size_t i = 0; i < sent.tokens.size(); ++i) {
        ++tr.step;
        auto feats = token_features(sent.tokens, norm, i, prev, prev2);
        int pred = tr.best_tag(feats);
        int gold = tag_id.at(sent.tags[i]);
        tr.update(feats, gold, pred);
        prev2 = std::move(prev);
        prev = model.tags_[static_cast<size_t>(pred)];
      }
    }
  }

  for (const auto& [feat, row] : tr.cells) {
    std::vector<double> avg(tr.n_tags, 0.0);
    bool any = false;
    for (size_t t = 0; t < tr.n_tags; ++t) {
      avg[t] = tr.averaged(row[t]);
      if (avg[t] != 0.0) any = true;
    }
    if (any) model.weights_.emplace(feat, std::move(avg));
  }
  return model;
}

int Tagger::best_tag(const std::vector<std::string>& features) const {
  std::vector<double> score(tags_.size(), 0.0);
  for (const auto& f : features) {
    auto it = weights_.find(f);
    if (it == weights_.end()) continue;
    for (size_t t = 0; t < tags_.size(); ++t) score[t] += it->second[t];
  }
  int best = 0;
  for (size_t t = 1; t < tags_.size(); ++t) {
    if (score[t] > score[best]) best = static_cast<int>(t);
  }
  return best;
}

std::vector<std::string> Tagger::tag(std::span<const std::string> tokens) const {
  std::vector<std::string> out;
  if (tokens.empty()) return out;
  if (tags_.empty()) throw ValueError("postag: model has no tags");

  std::vector<std::string> words(tokens.begin(), tokens.end());
  auto norm = normalize_all(words);
  out.reserve(tokens.size());
  std::string prev{kStartTag}, prev2{kStart2Tag};
  for (size_t i = 0; i < words.size(); ++i) {
    auto feats = token_features(words, norm, i, prev, prev2);
    int pred = best_tag(feats);
    out.push_back(tags_[static_cast<size_t>(pred)]);
    prev2 = std::move(prev);
    prev = out.back();
  }
  return out;
}

TaggedSentence Tagger::tag_sentence(std::span<const std::string> tokens) const {
  TaggedSentence s;
  s.tokens.assign(tokens.begin(), tokens.end());
  s.tags = tag(tokens);
  return s;
}

void Tagger::save(const std::string& path) const {
  nlohmann::json j;
  j["format"] = "quip-tagger";
  j["version"] = 1;
  j["tags"] = tags_;
  nlohmann::json w = nlohmann::json::object();
  for (const auto& [feat, row] : weights_) {
    nlohmann::json entries = nlohmann::json::array();
    for (size_t t = 0; t < row.size(); ++t) {
      if (row[t] != 0.0) entries.push_back({t, row[t]});
    }
    w[feat] = std::move(entries);
  }
  j["weights"] = std::move(w);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ResourceError("postag: cannot write " + path);
  out << j.dump(1, '\t') << '\n';
}

Tagger Tagger::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ResourceError("postag: cannot open tagger model " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("postag: invalid tagger model " + path + ": " + e.what());
  }
  if (j.value("format", "") != "quip-tagger" || j.value("version", 0) != 1)
    throw ParseError("postag: unrecognized tagger model format in " + path);

  Tagger model;
  model.tags_ = j.at("tags").get<std::vector<std::string>>();
  for (const auto& [feat, entries] : j.at("weights").items()) {
    std::vector<double> row(model.tags_.size(), 0.0);
    for (const auto& e : entries) {
      size_t t = e.at(0).get<size_t>();
      if (t >= row.size()) throw ParseError("postag: tag index out of range in " + path);
      row[t] = e.at(1).get<double>();
    }
    model.weights_.emplace(feat, std::move(row));
  }
  return model;
}

TaggedSentence parse_pretagged(std::string_view line) {
  TaggedSentence out;
  std::istringstream in{std::string(line)};
  std::string item;
  while (in >> item) {
    size_t slash = item.rfind('/');
    if (slash == std::string::npos || slash == 0 || slash + 1 == item.size())
      throw ParseError("postag: token '" + item + "' is not in token/TAG form");
    out.tokens.push_back(item.substr(0, slash));
    out.tags.push_back(item.substr(slash + 1));
  }
  return out;
}

std::vector<TaggedSentence> load_pretagged_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ResourceError("postag: cannot open pretagged file " + path);
  std::vector<TaggedSentence> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    out.push_back(parse_pretagged(line));
  }
  return out;
}

}  // namespace quip::postag
