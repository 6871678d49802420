#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace quip::postag {

struct TaggedSentence {
  std::vector<std::string> tokens;
  std::vector<std::string> tags;
};

// Greedy averaged-perceptron tagger over Penn Treebank tags. Decoding is
// left-to-right with word, prefix/suffix, shape, previous-tag and adjacent-word
// features, so unseen words fall back to suffix and shape evidence.
class Tagger {
 public:
  static Tagger train(const std::vector<TaggedSentence>& corpus, int epochs, uint64_t seed);

  static Tagger load(const std::string& path);
  void save(const std::string& path) const;

  std::vector<std::string> tag(std::span<const std::string> tokens) const;
  TaggedSentence tag_sentence(std::span<const std::string> tokens) const;

  const std::vector<std::string>& tagset() const { return tags_; }

 private:
  int best_tag(const std::vector<std::string>& features) const;

  std::vector<std::string> tags_;  // sorted; index is the tag id
  std::unordered_map<std::string, std::vector<double>> weights_;

  friend struct TaggerTrainer;
};

// One "token/TAG" sequence. Every token must carry exactly one tag suffix.
TaggedSentence parse_pretagged(std::string_view line);

// One sentence per line in the pretagged format; blank lines are skipped.
std::vector<TaggedSentence> load_pretagged_file(const std::string& path);

}  // namespace quip::postag
