#include "procstory/augment.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <numeric>
#include <set>

#include <json.hpp>

#include "procstory/error.hpp"
#include "procstory/hash.hpp"
#include "procstory/logging.hpp"
#include "procstory/rng.hpp"
#include "procstory/text.hpp"

namespace procstory {

using nlohmann::json;

bool is_human_participant(const Participant& participant, const LexicalResource& resource) {
  return participant.is_human || resource.is_human_phrase(participant.surface);
}

namespace {

std::string match_capitalization(const std::string& replacement, const std::string& original) {
  if (original.empty() || replacement.empty()) return replacement;
  if (std::isupper(static_cast<unsigned char>(original[0]))) {
    std::string out = replacement;
    out[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(out[0])));
    return out;
  }
  return replacement;
}

void replace_everywhere(AnnotatedStory& story, const std::string& from, const std::string& to) {
  for (Sentence& sentence : story.sentences) {
    // Re-scan after each replacement; spans shift as text changes.
    while (true) {
      std::vector<std::pair<std::size_t, std::size_t>> spans =
          find_phrase(sentence.text, from);
      if (spans.empty()) break;
      auto [begin, end] = spans.front();
      sentence.text = sentence.text.substr(0, begin) +
                      match_capitalization(to, sentence.text.substr(begin, end - begin)) +
                      sentence.text.substr(end);
    }
  }
  for (StateAnnotation& a : story.annotations) {
    if (a.participant == from) a.participant = to;
  }
}

void abstract_story(AnnotatedStory& story, const LexicalResource& resource) {
  std::set<std::string> taken;
  for (const Participant& p : story.participants) taken.insert(p.surface);

  for (Participant& p : story.participants) {
    if (is_human_participant(p, resource)) continue;
    std::optional<std::string> hypernym = resource.direct_hypernym_lemma(p.surface);
    if (!hypernym) {
      Logger::instance().warn("abstraction_no_hypernym", {{"participant", p.surface}});
      continue;
    }
    std::string target = to_lower(*hypernym);
    if (target == p.surface) continue;
    if (taken.count(target)) {
      Logger::instance().warn("abstraction_collision",
                              {{"participant", p.surface}, {"hypernym", target}});
      continue;
    }
    taken.erase(p.surface);
    taken.insert(target);
    replace_everywhere(story, p.surface, target);
    p.surface = target;
  }
  refresh_mentions(story);
}

}  // namespace

StoryPair abstract_participants(const StoryPair& pair, const LexicalResource& resource) {
  StoryPair out = pair;
  abstract_story(out.plausible, resource);
  abstract_story(out.implausible, resource);
  return out;
}

WordListInsertionModel::WordListInsertionModel(
    std::map<std::string, std::vector<std::string>> modifiers)
    : modifiers_(std::move(modifiers)) {}

WordListInsertionModel WordListInsertionModel::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open insertion lexicon: " + path);
  json doc;
  in >> doc;
  std::map<std::string, std::vector<std::string>> modifiers;
  for (const auto& [word, list] : doc.items()) {
    modifiers[word] = list.get<std::vector<std::string>>();
  }
  return WordListInsertionModel(std::move(modifiers));
}

std::vector<InsertionCandidate> WordListInsertionModel::propose(
    const std::string& sentence,
    const std::vector<std::pair<std::size_t, std::size_t>>& protected_spans,
    std::uint64_t seed) const {
  (void)protected_spans;
  (void)seed;
  std::vector<InsertionCandidate> candidates;
  std::vector<std::string> words = word_tokens(sentence);
  for (std::size_t i = 0; i < words.size(); ++i) {
    auto it = modifiers_.find(words[i]);
    if (it == modifiers_.end()) continue;
    double rank = 0;
    for (const std::string& modifier : it->second) {
      candidates.push_back({modifier, static_cast<int>(i), 1.0 / (1.0 + rank)});
      rank += 1.0;
    }
  }
  return candidates;
}

namespace {

/// Character offset of the gap in front of word-token `gap`.
std::optional<std::size_t> gap_offset(const std::string& sentence, int gap) {
  std::vector<TextToken> tokens = tokenize_with_spans(sentence);
  std::vector<const TextToken*> words;
  for (const TextToken& t : tokens) {
    if (std::isalnum(static_cast<unsigned char>(t.text[0])) || t.text[0] == '_') {
      words.push_back(&t);
    }
  }
  if (gap < 0 || gap > static_cast<int>(words.size())) return std::nullopt;
  if (gap == static_cast<int>(words.size())) {
    return words.empty() ? sentence.size() : words.back()->end;
  }
  return words[static_cast<std::size_t>(gap)]->begin;
}

void insert_into_sentence(Sentence& sentence,
                          const std::vector<std::pair<std::size_t, std::size_t>>& spans,
                          std::vector<InsertionCandidate> candidates,
                          const InsertOptions& options) {
  std::erase_if(candidates, [&](const InsertionCandidate& c) {
    if (c.score < options.min_score || c.word.empty()) return true;
    std::optional<std::size_t> offset = gap_offset(sentence.text, c.gap);
    if (!offset) return true;
    for (auto [begin, end] : spans) {
      if (*offset > begin && *offset < end) return true;  // would split a phrase
    }
    return false;
  });
  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const InsertionCandidate& a, const InsertionCandidate& b) {
                     if (a.score != b.score) return a.score > b.score;
                     if (a.gap != b.gap) return a.gap < b.gap;
                     return a.word < b.word;
                   });
  if (static_cast<int>(candidates.size()) > options.max_per_sentence) {
    candidates.resize(static_cast<std::size_t>(options.max_per_sentence));
  }
  // Apply right to left so earlier offsets stay valid.
  std::vector<std::pair<std::size_t, std::string>> edits;
  for (const InsertionCandidate& c : candidates) {
    std::optional<std::size_t> offset = gap_offset(sentence.text, c.gap);
    if (offset) edits.emplace_back(*offset, c.word);
  }
  std::stable_sort(edits.begin(), edits.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  for (const auto& [offset, word] : edits) {
    std::string insertion = word + " ";
    if (offset > 0 && sentence.text[offset - 1] != ' ') insertion = " " + insertion;
    sentence.text.insert(offset, insertion);
  }
}

}  // namespace

StoryPair insert_words(const StoryPair& pair, const InsertionModel& model,
                       std::uint64_t seed, const InsertOptions& options) {
  StoryPair out = pair;
  std::uint64_t stream = 0;
  for (AnnotatedStory* story : {&out.plausible, &out.implausible}) {
    for (Sentence& sentence : story->sentences) {
      std::vector<std::pair<std::size_t, std::size_t>> spans;
      for (const Participant& p : story->participants) {
        for (auto span : find_phrase(sentence.text, p.surface)) spans.push_back(span);
      }
      std::vector<InsertionCandidate> candidates =
          model.propose(sentence.text, spans, seed ^ (0x51ed2701ull * ++stream));
      insert_into_sentence(sentence, spans, std::move(candidates), options);
    }
    refresh_mentions(*story);
  }
  return out;
}

std::vector<RawStoryPair> load_raw_pairs(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open raw story file: " + path);
  std::vector<RawStoryPair> pairs;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (trim(line).empty()) continue;
    try {
      json record = json::parse(line);
      RawStoryPair raw;
      raw.id = record.value("id", "external-" + std::to_string(line_number));
      raw.sentences_a = record.at("sentences_a").get<std::vector<std::string>>();
      raw.sentences_b = record.at("sentences_b").get<std::vector<std::string>>();
      std::string side = record.at("plausible").get<std::string>();
      if (side != "a" && side != "b") {
        throw ParseError("plausible side must be \"a\" or \"b\"", line_number);
      }
      raw.plausible = side[0];
      if (record.contains("type") && !record["type"].is_null()) {
        raw.type = record["type"].get<std::string>();
      }
      pairs.push_back(std::move(raw));
    } catch (const json::exception& e) {
      throw ParseError(std::string("malformed raw story record: ") + e.what(), line_number);
    }
  }
  return pairs;
}

void save_raw_pairs(const std::vector<RawStoryPair>& pairs, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write raw story file: " + path);
  for (const RawStoryPair& raw : pairs) {
    json record = {{"id", raw.id},
                   {"sentences_a", raw.sentences_a},
                   {"sentences_b", raw.sentences_b},
                   {"plausible", std::string(1, raw.plausible)}};
    record["type"] = raw.type.empty() ? json(nullptr) : json(raw.type);
    out << record.dump() << "\n";
  }
}

std::vector<std::size_t> stratified_sample(const std::vector<std::string>& types, int k,
                                           std::uint64_t seed) {
  const std::size_t total = types.size();
  if (k < 0 || static_cast<std::size_t>(k) > total) {
    throw ValidationError("sample size k must lie in [0, corpus size]");
  }

  // Group indices per type, keyed by first appearance for deterministic
  // tie-breaking.
  std::vector<std::string> type_order;
  std::map<std::string, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < total; ++i) {
    const std::string& t = types[i];
    if (!groups.count(t)) type_order.push_back(t);
    groups[t].push_back(i);
  }

  struct Quota {
    std::string type;
    std::size_t population;
    int count;
    double fraction;
  };
  std::vector<Quota> quotas;
  int assigned = 0;
  for (const std::string& t : type_order) {
    double exact = static_cast<double>(k) * static_cast<double>(groups[t].size()) /
                   static_cast<double>(total);
    int floor_count = static_cast<int>(exact);
    quotas.push_back({t, groups[t].size(), floor_count, exact - floor_count});
    assigned += floor_count;
  }
  // Largest remainder; equal fractions resolve by first appearance.
  std::vector<std::size_t> by_fraction(quotas.size());
  std::iota(by_fraction.begin(), by_fraction.end(), 0);
  std::stable_sort(by_fraction.begin(), by_fraction.end(), [&](std::size_t a, std::size_t b) {
    return quotas[a].fraction > quotas[b].fraction;
  });
  for (std::size_t i = 0; assigned < k; ++i) {
    Quota& q = quotas[by_fraction[i % by_fraction.size()]];
    if (q.count < static_cast<int>(q.population)) {
      ++q.count;
      ++assigned;
    }
  }

  std::vector<std::size_t> selected;
  for (const Quota& q : quotas) {
    std::vector<std::size_t> indices = groups[q.type];
    Rng rng = derive_rng(seed, fnv1a64(q.type));
    std::shuffle(indices.begin(), indices.end(), rng);
    indices.resize(static_cast<std::size_t>(q.count));
    selected.insert(selected.end(), indices.begin(), indices.end());
  }
  std::sort(selected.begin(), selected.end());
  return selected;
}

}  // namespace procstory
