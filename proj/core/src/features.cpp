#include "quip/features.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <mutex>
#include <ostream>
#include <thread>

#include "quip/csv.hpp"
#include "quip/error.hpp"

namespace quip::features {

namespace {

Vector33 assemble(const postag::TaggedSentence& lower_tagged,
                  std::span<const std::string> lower_tokens, const Resources& res) {
  auto emotions = emolex::emotion_features(lower_tokens, res.emolex);
  auto tree = chunker::chunk(lower_tagged, res.subordinators);
  auto sse = chunker::sse_features(tree, lower_tagged.tokens.size());
  auto inc = distsem::incongruity(lower_tagged, res.embeddings);
  auto amb = wordnet::ambiguity_features(lower_tagged, res.wordnet, res.sense_cap);
  auto phon = phonetics::phonetic_features(lower_tokens, res.cmudict);

  Vector33 v{};
  size_t i = 0;
  for (int e : emotions) v[i++] = static_cast<double>(e);
  v[i++] = sse.np_count;
  v[i++] = sse.vp_count;
  v[i++] = sse.pp_count;
  v[i++] = sse.sbar_count;
  v[i++] = sse.lr_np;
  v[i++] = sse.lr_vp;
  v[i++] = sse.lr_pp;
  v[i++] = sse.apl1_np;
  v[i++] = sse.apl1_vp;
  v[i++] = sse.apl1_pp;
  v[i++] = sse.apl2_np;
  v[i++] = sse.apl2_vp;
  v[i++] = sse.apl2_pp;
  v[i++] = sse.rp_nv;
  v[i++] = inc.disconnection;
  v[i++] = inc.repetition;
  v[i++] = amb.sense_combination;
  v[i++] = amb.sense_farmost;
  v[i++] = amb.sense_closest;
  v[i++] = phon.allit_count;
  v[i++] = phon.allit_max_len;
  v[i++] = phon.rhyme_count;
  v[i++] = phon.rhyme_max_len;
  return v;
}

std::string lowercase(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (unsigned char c : s)
    out.push_back(static_cast<char>(c < 0x80 ? std::tolower(c) : c));
  return out;
}

}  // namespace

Vector33 featurize_text(const std::string& text, const Resources& res) {
  auto toks = corpus::tokenize(text);
  // Tags are decoded from the original-case stream; everything else sees the
  // lowercase one.
  auto tags = res.tagger.tag(toks.original_tokens);
  postag::TaggedSentence sent{toks.tokens, std::move(tags)};
  return assemble(sent, sent.tokens, res);
}

Vector33 featurize(const corpus::Example& example, const Resources& res) {
  return featurize_text(example.text, res);
}

Vector33 featurize_pretagged(const postag::TaggedSentence& sentence, const Resources& res) {
  postag::TaggedSentence lowered;
  lowered.tokens.reserve(sentence.tokens.size());
  for (const auto& t : sentence.tokens) lowered.tokens.push_back(lowercase(t));
  lowered.tags = sentence.tags;
  return assemble(lowered, lowered.tokens, res);
}

FeatureTable featurize_dataset(const std::vector<corpus::Example>& examples,
                               const Resources& res, int jobs, bool pretagged) {
  if (jobs < 1) throw ValueError("features: jobs must be >= 1");
  const size_t n = examples.size();

  FeatureTable table;
  table.x = Matrix::zeros(n, kFeatureNames.size());
  table.labels.resize(n);

  std::atomic<size_t> next{0};
  std::mutex err_mutex;
  std::vector<std::pair<int64_t, std::string>> errors;

  auto worker = [&] {
    for (;;) {
      size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        Vector33 v;
        if (pretagged) {
          v = featurize_pretagged(postag::parse_pretagged(examples[i].text), res);
        } else {
          v = featurize(examples[i], res);
        }
        std::copy(v.begin(), v.end(), table.x.row(i).begin());
        table.labels[i] = examples[i].label;
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> lock(err_mutex);
        errors.emplace_back(examples[i].id, e.what());
      }
    }
  };

  if (jobs == 1 || n < 2) {
    worker();
  } else {
    std::vector<std::thread> pool;
    int threads = std::min<int>(jobs, static_cast<int>(n));
    pool.reserve(static_cast<size_t>(threads));
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  if (!errors.empty()) {
    auto worst = std::min_element(errors.begin(), errors.end());
    throw Error("features: example " + std::to_string(worst->first) + ": " + worst->second);
  }
  return table;
}

std::string format_double(double v) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, p);
}

void write_csv(std::ostream& out, const FeatureTable& table) {
  if (table.x.cols != kFeatureNames.size())
    throw SchemaError("features: expected " + std::to_string(kFeatureNames.size()) +
                      " columns, got " + std::to_string(table.x.cols));
  std::vector<std::string> header;
  header.reserve(kFeatureNames.size() + 1);
  for (auto name : kFeatureNames) header.emplace_back(name);
  header.emplace_back("label");
  csv::write_row(out, header);

  std::vector<std::string> row(kFeatureNames.size() + 1);
  for (size_t r = 0; r < table.x.rows; ++r) {
    for (size_t c = 0; c < table.x.cols; ++c) row[c] = format_double(table.x.at(r, c));
    row.back() = std::to_string(table.labels[r]);
    csv::write_row(out, row);
  }
}

void write_csv_file(const std::string& path, const FeatureTable& table) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ResourceError("features: cannot write " + path);
  write_csv(out, table);
}

FeatureTable read_csv_file(const std::string& path) {
  auto rows = csv::read_file(path);
  if (rows.empty()) throw SchemaError("features: empty feature CSV " + path);

  const auto& header = rows.front();
  if (header.size() != kFeatureNames.size() + 1)
    throw SchemaError("features: header of " + path + " has " + std::to_string(header.size()) +
                      " columns, expected " + std::to_string(kFeatureNames.size() + 1));
  for (size_t c = 0; c < kFeatureNames.size(); ++c) {
    if (header[c] != kFeatureNames[c])
      throw SchemaError("features: column " + std::to_string(c) + " of " + path + " is '" +
                        header[c] + "', expected '" + std::string(kFeatureNames[c]) + "'");
  }
  if (header.back() != "label")
    throw SchemaError("features: last column of " + path + " must be 'label'");

  FeatureTable table;
  table.x = Matrix::zeros(rows.size() - 1, kFeatureNames.size());
  table.labels.resize(rows.size() - 1);
  for (size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.size() != header.size())
      throw SchemaError("features: row " + std::to_string(r) + " of " + path +
                        " has wrong field count");
    for (size_t c = 0; c < kFeatureNames.size(); ++c) {
      const std::string& s = row[c];
      double v = 0;
      auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
      if (ec != std::errc{} || p != s.data() + s.size())
        throw ParseError("features: bad value '" + s + "' at row " + std::to_string(r));
      table.x.at(r - 1, c) = v;
    }
    const std::string& lab = row.back();
    if (lab == "0") table.labels[r - 1] = 0;
    else if (lab == "1") table.labels[r - 1] = 1;
    else throw ValueError("features: non-binary label '" + lab + "' at row " + std::to_string(r));
  }
  return table;
}

}  // namespace quip::features
