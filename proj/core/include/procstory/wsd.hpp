#pragma once

#include <optional>
#include <string>

#include "procstory/lexicon.hpp"

namespace procstory {

/// Picks the synset a phrase denotes in a story context. The physicality
/// filter runs on its output, so the implementation decides how much
/// context matters.
class WordSenseDisambiguator {
 public:
  virtual ~WordSenseDisambiguator() = default;
  virtual std::optional<std::string> disambiguate(const std::string& phrase,
                                                  const std::string& context,
                                                  const LexicalResource& resource) const = 0;
};

/// Most-frequent-sense baseline: first listed sense of the phrase, head
/// word as fallback. Ignores context.
class FirstSenseWsd : public WordSenseDisambiguator {
 public:
  std::optional<std::string> disambiguate(const std::string& phrase,
                                          const std::string& context,
                                          const LexicalResource& resource) const override;
};

}  // namespace procstory
