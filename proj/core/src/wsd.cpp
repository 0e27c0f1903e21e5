#include "procstory/wsd.hpp"

#include "procstory/text.hpp"

namespace procstory {

std::optional<std::string> FirstSenseWsd::disambiguate(const std::string& phrase,
                                                       const std::string& context,
                                                       const LexicalResource& resource) const {
  (void)context;
  if (auto synset = resource.first_synset(phrase)) return synset;
  std::vector<std::string> words = word_tokens(phrase);
  if (words.size() > 1) return resource.first_synset(words.back());
  return std::nullopt;
}

}  // namespace procstory
