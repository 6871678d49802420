#pragma once

#include <array>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "quip/chunker.hpp"
#include "quip/corpus.hpp"
#include "quip/distsem.hpp"
#include "quip/emolex.hpp"
#include "quip/matrix.hpp"
#include "quip/phonetics.hpp"
#include "quip/postag.hpp"
#include "quip/wordnet.hpp"

namespace quip::features {

// Canonical feature order. Frozen: CSV files, trained models, and importance
// reports all index into this list.
inline constexpr std::array<std::string_view, 33> kFeatureNames = {
    // emotion counts
    "fear", "anger", "anticipation", "trust", "surprise",
    "positive", "negative", "sadness", "disgust", "joy",
    // structural statistics
    "np_count", "vp_count", "pp_count", "sbar_count",
    "lr_np", "lr_vp", "lr_pp",
    "apl1_np", "apl1_vp", "apl1_pp",
    "apl2_np", "apl2_vp", "apl2_pp",
    "rp_nv",
    // incongruity, ambiguity, phonetic style
    "disconnection", "repetition",
    "sense_combination", "sense_farmost", "sense_closest",
    "allit_count", "allit_max_len", "rhyme_count", "rhyme_max_len",
};

using Vector33 = std::array<double, 33>;

// Every loaded table/model the extractors need. Immutable after construction;
// featurize only reads it, so one instance serves any number of threads.
struct Resources {
  emolex::Lexicon emolex;
  postag::Tagger tagger;
  chunker::SubordinatorList subordinators;
  distsem::EmbeddingTable embeddings;
  wordnet::Graph wordnet;
  phonetics::PronLexicon cmudict;
  int sense_cap = 8;
};

Vector33 featurize_text(const std::string& text, const Resources& res);
Vector33 featurize(const corpus::Example& example, const Resources& res);
// For pre-tagged input: tokens keep their original case, tags are trusted.
Vector33 featurize_pretagged(const postag::TaggedSentence& sentence, const Resources& res);

struct FeatureTable {
  Matrix x;               // rows x 33 in canonical order (or a masked subset)
  std::vector<int> labels;
};

// Row i always corresponds to examples[i]; worker count never changes the
// output. Per-example failures rethrow with the example id attached.
FeatureTable featurize_dataset(const std::vector<corpus::Example>& examples,
                               const Resources& res, int jobs = 1, bool pretagged = false);

// CSV with the 33 canonical names plus "label"; values round-trip exactly.
void write_csv(std::ostream& out, const FeatureTable& table);
void write_csv_file(const std::string& path, const FeatureTable& table);
FeatureTable read_csv_file(const std::string& path);

// Shortest decimal form that parses back to the same double.
std::string format_double(double v);

}  // namespace quip::features
