#pragma once

#include <string>
#include <vector>

#include "procstory/schema.hpp"
#include "procstory/story.hpp"

namespace procstory {

/// A broken invariant, reported as data rather than thrown.
struct Violation {
  std::string field;    // e.g. "conflict", "annotations[3].precondition"
  std::string message;
};

struct ValidateOptions {
  /// Externally ingested pairs carry no conflict annotation; loaders for
  /// augmented data relax this one requirement.
  bool require_conflict = true;
};

std::vector<Violation> validate_story_pair(const StoryPair& pair,
                                           const AttributeSchema& schema,
                                           const ValidateOptions& options = {});

/// Reads one JSON record per line. Malformed JSON raises ParseError with
/// the line number; invariant violations raise ValidationError naming the
/// pair id and field.
std::vector<StoryPair> load_dataset(const std::string& path,
                                    const AttributeSchema& schema,
                                    const ValidateOptions& options = {});

/// One JSONL line per pair; load_dataset(save_dataset(x)) == x.
void save_dataset(const std::vector<StoryPair>& pairs, const std::string& path);

StoryPair story_pair_from_json_line(const std::string& line);
std::string story_pair_to_json_line(const StoryPair& pair);

bool story_pair_equal(const StoryPair& a, const StoryPair& b);

}  // namespace procstory
