#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace quip::corpus {

struct Example {
  int64_t id = 0;
  std::string text;
  int label = 0;  // 1 = humorous, 0 = not
  std::optional<std::vector<double>> embedding;
};

struct DatasetSchema {
  std::string text_column = "text";
  std::string label_column = "label";
};

// Reads a CSV with a header row. Labels accept 0/1 and true/false spellings.
// If embedding_path is given, one whitespace-separated vector per line is
// attached to the example with the same row index; the row counts must match.
std::vector<Example> load_dataset(const std::string& path,
                                  const DatasetSchema& schema = {},
                                  const std::optional<std::string>& embedding_path = std::nullopt);

struct TokenizedText {
  std::vector<std::string> tokens;           // lowercased, punctuation stripped
  std::vector<std::string> original_tokens;  // same split, case preserved (POS tagging input)
  std::string original;
};

// Lowercases ASCII letters, removes ASCII punctuation, splits on whitespace.
// Bytes outside ASCII pass through untouched.
TokenizedText tokenize(std::string_view text);

// Seeded shuffle, then the first round(val_fraction * n) examples become the
// validation set (clamped so both sides are non-empty). Same seed, same split.
std::pair<std::vector<Example>, std::vector<Example>>
split(const std::vector<Example>& examples, double val_fraction, uint64_t seed);

}  // namespace quip::corpus
