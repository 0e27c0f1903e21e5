#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace procstory {

/// One step of a story. Indices are contiguous from 0 within a story.
struct Sentence {
  int index = 0;
  std::string text;
};

/// Character span of one participant occurrence.
struct Mention {
  int sentence = 0;
  std::size_t begin = 0;
  std::size_t end = 0;

  bool operator==(const Mention&) const = default;
};

/// An entity tracked through the story. Identity within a story is the
/// lowercase surface string; mentions are recomputed whenever sentence
/// text changes.
struct Participant {
  std::string surface;
  std::vector<Mention> mentions;
  bool is_human = false;
};

/// Precondition/effect state of one attribute for one participant at one
/// step. Labels are strings from the schema's label spaces.
struct StateAnnotation {
  std::string participant;
  int step = 0;
  std::string attribute;
  std::string precondition;
  std::string effect;
};

/// The two sentences of an implausible story whose implied states
/// contradict. Always first < second.
struct ConflictPair {
  int first = 0;
  int second = 0;

  bool operator==(const ConflictPair&) const = default;
};

constexpr int kPlausible = 1;
constexpr int kImplausible = 0;

struct AnnotatedStory {
  std::vector<Sentence> sentences;
  std::vector<Participant> participants;
  std::vector<StateAnnotation> annotations;
  std::optional<ConflictPair> conflict;
  std::optional<int> label;  // 1 plausible, 0 implausible, absent for unlabeled

  int step_count() const { return static_cast<int>(sentences.size()); }
  const Participant* find_participant(const std::string& surface) const;
};

/// The unit of source-task training: a plausible story and its implausible
/// counterpart sharing a scenario.
struct StoryPair {
  std::string pair_id;
  AnnotatedStory plausible;
  AnnotatedStory implausible;
};

/// Recompute every participant's mention list by whole-word search over
/// the story sentences. Call after any sentence or surface edit.
void refresh_mentions(AnnotatedStory& story);

}  // namespace procstory
