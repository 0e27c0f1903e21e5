#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace procstory {

/// Hashing vocabulary: no files, stable ids, open vocabulary. Ids 0..3 are
/// reserved for specials; words map into [4, vocab_size).
class Tokenizer {
 public:
  static constexpr int kPad = 0;
  static constexpr int kCls = 1;
  static constexpr int kSep = 2;
  static constexpr int kUnk = 3;
  static constexpr int kNumSpecials = 4;

  explicit Tokenizer(int vocab_size = 4096);

  int vocab_size() const { return vocab_size_; }
  int word_id(std::string_view word) const;
  std::vector<int> encode_words(std::string_view text) const;

 private:
  int vocab_size_;
};

}  // namespace procstory
