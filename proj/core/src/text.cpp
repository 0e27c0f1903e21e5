#include "procstory/text.hpp"

#include <algorithm>
#include <array>
#include <cctype>

namespace procstory {

namespace {

bool is_word_char(unsigned char c) { return std::isalnum(c) != 0 || c == '_'; }

bool is_abbreviation(std::string_view text, std::size_t dot_pos) {
  static const std::array<std::string_view, 10> kAbbrev = {
      "mr", "mrs", "ms", "dr", "st", "vs", "etc", "e.g", "i.e", "no"};
  std::size_t start = dot_pos;
  while (start > 0 && (is_word_char(static_cast<unsigned char>(text[start - 1])) ||
                       text[start - 1] == '.')) {
    --start;
  }
  if (start == dot_pos) return false;
  std::string word = to_lower(text.substr(start, dot_pos - start));
  return std::find(kAbbrev.begin(), kAbbrev.end(), word) != kAbbrev.end();
}

}  // namespace

std::string to_lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::string trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::vector<TextToken> tokenize_with_spans(std::string_view text) {
  std::vector<TextToken> tokens;
  std::size_t i = 0;
  while (i < text.size()) {
    unsigned char c = static_cast<unsigned char>(text[i]);
    if (std::isspace(c)) {
      ++i;
      continue;
    }
    if (is_word_char(c)) {
      std::size_t j = i + 1;
      while (j < text.size()) {
        unsigned char d = static_cast<unsigned char>(text[j]);
        if (is_word_char(d)) {
          ++j;
        } else if (d == '\'' && j + 1 < text.size() &&
                   is_word_char(static_cast<unsigned char>(text[j + 1]))) {
          j += 2;
        } else {
          break;
        }
      }
      tokens.push_back({std::string(text.substr(i, j - i)), i, j});
      i = j;
    } else {
      tokens.push_back({std::string(text.substr(i, 1)), i, i + 1});
      ++i;
    }
  }
  return tokens;
}

std::vector<std::string> word_tokens(std::string_view text) {
  std::vector<std::string> out;
  for (const TextToken& t : tokenize_with_spans(text)) {
    if (is_word_char(static_cast<unsigned char>(t.text[0]))) {
      out.push_back(to_lower(t.text));
    }
  }
  return out;
}

std::vector<std::pair<std::size_t, std::size_t>> find_phrase(
    std::string_view text, std::string_view phrase) {
  std::vector<std::pair<std::size_t, std::size_t>> spans;
  if (phrase.empty() || text.size() < phrase.size()) return spans;
  std::string haystack = to_lower(text);
  std::string needle = to_lower(phrase);
  std::size_t pos = 0;
  while ((pos = haystack.find(needle, pos)) != std::string::npos) {
    bool left_ok = pos == 0 || !is_word_char(static_cast<unsigned char>(haystack[pos - 1]));
    std::size_t end = pos + needle.size();
    bool right_ok =
        end == haystack.size() || !is_word_char(static_cast<unsigned char>(haystack[end]));
    if (left_ok && right_ok) {
      spans.emplace_back(pos, end);
      pos = end;
    } else {
      ++pos;
    }
  }
  return spans;
}

std::vector<std::string> RuleBasedSplitter::split(std::string_view text) const {
  std::vector<std::string> sentences;
  std::size_t start = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (c != '.' && c != '!' && c != '?') continue;
    if (c == '.' && is_abbreviation(text, i)) continue;
    // Consume any run of closing punctuation after the terminal mark.
    std::size_t end = i + 1;
    while (end < text.size() && (text[end] == '"' || text[end] == '\'' ||
                                 text[end] == ')' || text[end] == '.')) {
      ++end;
    }
    if (end < text.size() && !std::isspace(static_cast<unsigned char>(text[end]))) {
      continue;  // mid-token dot, e.g. "3.5"
    }
    std::string sentence = trim(text.substr(start, end - start));
    if (!sentence.empty()) sentences.push_back(sentence);
    i = end;
    start = end;
  }
  std::string tail = trim(text.substr(start));
  if (!tail.empty()) sentences.push_back(tail);
  return sentences;
}

const SentenceSplitter& default_splitter() {
  static RuleBasedSplitter splitter;
  return splitter;
}

}  // namespace procstory
