#include "procstory/tokenizer.hpp"

#include "procstory/error.hpp"
#include "procstory/hash.hpp"
#include "procstory/text.hpp"

namespace procstory {

Tokenizer::Tokenizer(int vocab_size) : vocab_size_(vocab_size) {
  if (vocab_size_ <= kNumSpecials) {
    throw ConfigError("tokenizer vocab must exceed the reserved special ids");
  }
}

int Tokenizer::word_id(std::string_view word) const {
  std::uint64_t h = fnv1a64(word);
  return kNumSpecials +
         static_cast<int>(h % static_cast<std::uint64_t>(vocab_size_ - kNumSpecials));
}

std::vector<int> Tokenizer::encode_words(std::string_view text) const {
  std::vector<int> ids;
  for (const std::string& w : word_tokens(text)) {
    ids.push_back(word_id(w));
  }
  return ids;
}

}  // namespace procstory
