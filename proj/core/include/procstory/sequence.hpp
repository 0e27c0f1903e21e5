#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "procstory/story.hpp"
#include "procstory/tokenizer.hpp"

namespace procstory {

/// Timestep id of every token: specials (classifier-start, separators,
/// question, padding) are 0; sentence tokens are 1 before the current
/// step, 2 at it, 3 after it.
enum Timestep : int {
  kTsSpecial = 0,
  kTsPast = 1,
  kTsCurrent = 2,
  kTsFuture = 3,
};

/// [begin, end) token-index range.
struct TokenSegment {
  int begin = 0;
  int end = 0;
  int size() const { return end - begin; }
};

/// One participant-conditioned encoder input for one story step.
/// Layout: CLS, question words, SEP, then each sentence's words followed
/// by a SEP.
struct TokenizedInput {
  std::vector<int> token_ids;
  std::vector<int> timestep_ids;
  TokenSegment question;                // question word tokens
  std::vector<TokenSegment> sentences;  // word tokens per sentence
  int step_index = 0;

  int length() const { return static_cast<int>(token_ids.size()); }
  /// First token of the sentence's segment; the step representation is
  /// read from this position.
  int head_token(int sentence) const {
    return sentences[static_cast<std::size_t>(sentence)].begin;
  }
};

struct SequenceOptions {
  std::string question_template = "where is {}";
  std::string dummy_surface = "_";
  /// When positive, sequences longer than this are shortened by dropping
  /// future-sentence tokens first, then past; the question and the current
  /// sentence are never touched and every sentence keeps one token.
  int max_tokens = 0;
};

TokenizedInput build_participant_sequence(const std::vector<Sentence>& sentences,
                                          std::string_view participant_surface,
                                          int step_index, const Tokenizer& tokenizer,
                                          const SequenceOptions& options);

/// Same layout with the placeholder participant in the question.
TokenizedInput build_dummy_sequence(const std::vector<Sentence>& sentences, int step_index,
                                    const Tokenizer& tokenizer,
                                    const SequenceOptions& options);

/// Input sequences for one participant slot of a story pair, one per step
/// on each side. A side whose story lacks the participant carries the
/// dummy question instead.
struct JointInputPair {
  std::string surface;  // the real participant; dummy marker on the missing side
  bool dummy_first = false;
  bool dummy_second = false;
  std::vector<TokenizedInput> first_steps;
  std::vector<TokenizedInput> second_steps;
};

/// One entry per participant in E ∪ E': common participants aligned,
/// unmatched ones paired with a dummy on the opposite side.
std::vector<JointInputPair> build_joint_pairs(const AnnotatedStory& first,
                                              const AnnotatedStory& second,
                                              const Tokenizer& tokenizer,
                                              const SequenceOptions& options);

}  // namespace procstory
