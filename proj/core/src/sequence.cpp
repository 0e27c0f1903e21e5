#include "procstory/sequence.hpp"

#include <algorithm>
#include <numeric>

#include "procstory/error.hpp"
#include "procstory/text.hpp"

namespace procstory {

namespace {

std::string render_question(const SequenceOptions& options, std::string_view surface) {
  std::string q = options.question_template;
  std::size_t pos = q.find("{}");
  if (pos == std::string::npos) {
    throw ConfigError("question template must contain a {} placeholder");
  }
  q.replace(pos, 2, surface);
  return q;
}

TokenizedInput assemble(const std::vector<Sentence>& sentences, std::string_view question,
                        int step_index, const Tokenizer& tokenizer,
                        const SequenceOptions& options) {
  if (sentences.empty()) throw ValidationError("cannot build a sequence over an empty story");
  const int n = static_cast<int>(sentences.size());
  if (step_index < 0 || step_index >= n) {
    throw ValidationError("step index " + std::to_string(step_index) +
                          " out of range for a " + std::to_string(n) + "-sentence story");
  }

  std::vector<int> question_ids = tokenizer.encode_words(question);
  std::vector<std::vector<int>> sentence_ids;
  sentence_ids.reserve(sentences.size());
  for (const Sentence& s : sentences) {
    sentence_ids.push_back(tokenizer.encode_words(s.text));
  }

  if (options.max_tokens > 0) {
    auto total = [&] {
      int t = 1 + static_cast<int>(question_ids.size()) + 1;  // CLS + question + SEP
      for (const auto& ids : sentence_ids) t += static_cast<int>(ids.size()) + 1;
      return t;
    };
    // Future sentences shrink first, farthest step first, tail tokens first;
    // then past sentences, earliest first, leading tokens first. Each
    // sentence keeps one token so its head position stays defined.
    for (int i = n - 1; i > step_index && total() > options.max_tokens; --i) {
      auto& ids = sentence_ids[static_cast<std::size_t>(i)];
      while (ids.size() > 1 && total() > options.max_tokens) ids.pop_back();
    }
    for (int i = 0; i < step_index && total() > options.max_tokens; ++i) {
      auto& ids = sentence_ids[static_cast<std::size_t>(i)];
      while (ids.size() > 1 && total() > options.max_tokens) ids.erase(ids.begin());
    }
    if (total() > options.max_tokens) {
      throw ValidationError("sequence exceeds the encoder maximum of " +
                            std::to_string(options.max_tokens) +
                            " tokens even after truncation");
    }
  }

  TokenizedInput input;
  input.step_index = step_index;
  auto push = [&input](int id, int ts) {
    input.token_ids.push_back(id);
    input.timestep_ids.push_back(ts);
  };

  push(Tokenizer::kCls, kTsSpecial);
  input.question.begin = input.length();
  for (int id : question_ids) push(id, kTsSpecial);
  input.question.end = input.length();
  push(Tokenizer::kSep, kTsSpecial);

  for (int i = 0; i < n; ++i) {
    int ts = i < step_index ? kTsPast : (i == step_index ? kTsCurrent : kTsFuture);
    TokenSegment segment;
    segment.begin = input.length();
    for (int id : sentence_ids[static_cast<std::size_t>(i)]) push(id, ts);
    segment.end = input.length();
    input.sentences.push_back(segment);
    push(Tokenizer::kSep, kTsSpecial);
  }
  return input;
}

}  // namespace

TokenizedInput build_participant_sequence(const std::vector<Sentence>& sentences,
                                          std::string_view participant_surface,
                                          int step_index, const Tokenizer& tokenizer,
                                          const SequenceOptions& options) {
  if (trim(participant_surface).empty()) {
    throw ValidationError("participant surface is empty");
  }
  return assemble(sentences, render_question(options, participant_surface), step_index,
                  tokenizer, options);
}

TokenizedInput build_dummy_sequence(const std::vector<Sentence>& sentences, int step_index,
                                    const Tokenizer& tokenizer,
                                    const SequenceOptions& options) {
  return assemble(sentences, render_question(options, options.dummy_surface), step_index,
                  tokenizer, options);
}

std::vector<JointInputPair> build_joint_pairs(const AnnotatedStory& first,
                                              const AnnotatedStory& second,
                                              const Tokenizer& tokenizer,
                                              const SequenceOptions& options) {
  auto steps_for = [&](const AnnotatedStory& story, const std::string& surface,
                       bool dummy) {
    std::vector<TokenizedInput> steps;
    for (int j = 0; j < story.step_count(); ++j) {
      steps.push_back(dummy ? build_dummy_sequence(story.sentences, j, tokenizer, options)
                            : build_participant_sequence(story.sentences, surface, j,
                                                         tokenizer, options));
    }
    return steps;
  };

  auto contains = [](const AnnotatedStory& story, const std::string& surface) {
    return story.find_participant(surface) != nullptr;
  };

  std::vector<JointInputPair> pairs;
  for (const Participant& p : first.participants) {
    JointInputPair pair;
    pair.surface = p.surface;
    pair.dummy_second = !contains(second, p.surface);
    pair.first_steps = steps_for(first, p.surface, false);
    pair.second_steps = steps_for(second, p.surface, pair.dummy_second);
    pairs.push_back(std::move(pair));
  }
  for (const Participant& p : second.participants) {
    if (contains(first, p.surface)) continue;  // already aligned above
    JointInputPair pair;
    pair.surface = p.surface;
    pair.dummy_first = true;
    pair.first_steps = steps_for(first, p.surface, true);
    pair.second_steps = steps_for(second, p.surface, false);
    pairs.push_back(std::move(pair));
  }
  return pairs;
}

}  // namespace procstory
