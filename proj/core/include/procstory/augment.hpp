#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "procstory/dataset.hpp"
#include "procstory/lexicon.hpp"
#include "procstory/story.hpp"

namespace procstory {

/// A participant counts as human when the gold flag says so or its
/// first-sense hypernym path passes through the person synset.
bool is_human_participant(const Participant& participant, const LexicalResource& resource);

/// Replaces every non-human participant with its direct hypernym lemma in
/// all sentences and annotation records; annotations are otherwise copied
/// verbatim. Participants without a hypernym (or whose rename would
/// collide with another surface) stay unchanged, with a warning logged.
StoryPair abstract_participants(const StoryPair& pair, const LexicalResource& resource);

/// One proposed insertion: `word` goes in front of word-token `gap`
/// (gap == token count appends at the end).
struct InsertionCandidate {
  std::string word;
  int gap = 0;
  double score = 0.0;
};

/// Contract for the adjective/adverb suggestion model. `protected_spans`
/// are character ranges (participant phrases) an insertion must not split.
/// Implementations must be deterministic for a fixed seed.
class InsertionModel {
 public:
  virtual ~InsertionModel() = default;
  virtual std::vector<InsertionCandidate> propose(
      const std::string& sentence,
      const std::vector<std::pair<std::size_t, std::size_t>>& protected_spans,
      std::uint64_t seed) const = 0;
};

/// Table-driven default: suggests modifiers listed for the word that
/// follows the gap. Good enough to enrich fixture sentences without a
/// pretrained LM in the loop.
class WordListInsertionModel : public InsertionModel {
 public:
  explicit WordListInsertionModel(std::map<std::string, std::vector<std::string>> modifiers);
  static WordListInsertionModel load(const std::string& path);

  std::vector<InsertionCandidate> propose(
      const std::string& sentence,
      const std::vector<std::pair<std::size_t, std::size_t>>& protected_spans,
      std::uint64_t seed) const override;

 private:
  std::map<std::string, std::vector<std::string>> modifiers_;
};

struct InsertOptions {
  int max_per_sentence = 2;
  double min_score = 0.0;
};

/// Adds modifier words to sentences, keeps every annotation verbatim, and
/// recomputes mention spans. Candidates that would split a participant
/// phrase are rejected.
StoryPair insert_words(const StoryPair& pair, const InsertionModel& model,
                       std::uint64_t seed, const InsertOptions& options = {});

/// External story pair before labeling: two sentence lists and which side
/// is plausible.
struct RawStoryPair {
  std::string id;
  std::vector<std::string> sentences_a;
  std::vector<std::string> sentences_b;
  char plausible = 'a';
  std::string type;  // story type tag for stratified sampling; may be empty
};

std::vector<RawStoryPair> load_raw_pairs(const std::string& path);
void save_raw_pairs(const std::vector<RawStoryPair>& pairs, const std::string& path);

/// Largest-remainder stratified sample over type tags: per-type counts
/// proportional to corpus composition, remainders by largest fraction,
/// item choice within a type by seeded shuffle. Returns selected indices
/// in ascending order.
std::vector<std::size_t> stratified_sample(const std::vector<std::string>& types, int k,
                                           std::uint64_t seed);

}  // namespace procstory
