#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "procstory/schema.hpp"
#include "procstory/story.hpp"

namespace procstory {

enum class PromptMode { active_detection, state_annotation };

/// One in-context example. In state mode `participant` names whose
/// attribute states the block spells out; active mode shows per-step
/// active lists instead.
struct PromptDemo {
  AnnotatedStory story;
  std::string participant;
};

struct PromptRequest {
  PromptMode mode = PromptMode::active_detection;
  std::string attribute;
  const AnnotatedStory* query = nullptr;
  std::string query_participant;  // state mode only
  std::vector<StateAnnotation> annotations_so_far;
  std::vector<PromptDemo> demonstrations;
};

/// Participants sorted by first mention (sentence, offset, surface);
/// unmentioned ones last by surface. Fixes the p_<i> numbering so
/// permuted inputs produce identical prompts.
std::vector<std::string> canonical_participant_order(const AnnotatedStory& story);

/// Renders the canonical code-style prompt: one Node class block, then
/// each story as Node declarations plus one function per sentence, blocks
/// separated by two blank lines, the query's final function body ending
/// with the open comment. Byte-deterministic.
std::string build_code_prompt(const PromptRequest& request);

/// Per-step active participant surfaces parsed from a completion.
/// Accepts function-style blocks (`def step_2():` ... `active = [p_1]`)
/// and the shorthand `step_2: [pizza]`. Unknown names are dropped.
/// nullopt when nothing in the text parses (malformed completion).
std::optional<std::vector<std::set<std::string>>> parse_active_completion(
    const std::string& completion, const std::vector<std::string>& participant_order,
    int steps);

struct StateLine {
  int step = 0;
  std::optional<std::string> precondition;
  std::optional<std::string> effect;
};

/// Precondition/effect strings per step for one participant and
/// attribute, raw (not yet schema-checked).
std::optional<std::map<int, StateLine>> parse_state_completion(
    const std::string& completion, const std::vector<std::string>& participant_order,
    const std::string& participant, const std::string& attribute, int steps);

}  // namespace procstory
