#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace procstory {

std::string to_lower(std::string_view s);
std::string trim(std::string_view s);

/// A surface token with its [begin, end) character span in the source text.
struct TextToken {
  std::string text;
  std::size_t begin = 0;
  std::size_t end = 0;
};

/// Splits on whitespace; punctuation becomes its own token, apostrophes
/// stay inside words ("tom's" is one token).
std::vector<TextToken> tokenize_with_spans(std::string_view text);

/// Word tokens lowercased, punctuation dropped. The unit used for
/// timestep accounting and encoder inputs.
std::vector<std::string> word_tokens(std::string_view text);

/// Case-insensitive whole-word occurrences of `phrase` in `text`.
/// Returns [begin, end) character spans. Word boundaries are
/// non-alphanumeric characters or string edges.
std::vector<std::pair<std::size_t, std::size_t>> find_phrase(
    std::string_view text, std::string_view phrase);

/// Sentence boundary detection is a contract so the rule-based default can
/// be swapped for a trained splitter.
class SentenceSplitter {
 public:
  virtual ~SentenceSplitter() = default;
  virtual std::vector<std::string> split(std::string_view text) const = 0;
};

/// Terminal-punctuation splitter with an abbreviation guard. Text without
/// terminal punctuation comes back as a single sentence.
class RuleBasedSplitter : public SentenceSplitter {
 public:
  std::vector<std::string> split(std::string_view text) const override;
};

const SentenceSplitter& default_splitter();

}  // namespace procstory
