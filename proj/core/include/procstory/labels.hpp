#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "procstory/schema.hpp"
#include "procstory/story.hpp"

namespace procstory {

enum class Regime { story_centric, participant_centric, sentence_centric };

std::string to_string(Regime regime);
Regime regime_from_string(const std::string& name);

struct RegimeConfig {
  Regime regime = Regime::story_centric;
  // Loss weights; must be non-negative and sum to 1. The sentence-centric
  // regime forces w_plausibility to 0.
  double w_precondition = 0.4;
  double w_effect = 0.4;
  double w_conflict = 0.1;
  double w_plausibility = 0.1;
  int epochs = 15;
  double learning_rate = 1e-6;
  int batch_size = 1;
  int grad_accumulation = 2;
  double weight_decay = 0.01;
  std::uint64_t seed = 0;

  void validate() const;
  /// The appendix defaults for each regime: 0.4/0.4/0.1/0.1 with a story
  /// loss, 0.4/0.4/0.2 without one.
  static RegimeConfig defaults_for(Regime regime);
};

/// Supervision for one participant-conditioned sequence.
struct SequenceLabels {
  std::vector<std::vector<int>> precondition;  // [attribute][step] -> label index
  std::vector<std::vector<int>> effect;
  Eigen::VectorXd conflict_target;  // one entry per sentence pair, {0,1}
  std::optional<int> story_label;   // absent iff sentence_centric

  int steps() const {
    return precondition.empty() ? 0 : static_cast<int>(precondition[0].size());
  }
};

enum class PairSide { plausible, implausible };

/// Builds the supervision for `participant`'s sequence over one side of
/// the pair. Story labels follow the regime: story-centric labels every
/// sequence with its story's plausibility; participant-centric marks a
/// sequence implausible only when the participant surface occurs in a
/// conflict sentence; sentence-centric omits the story label.
SequenceLabels assemble_labels(const StoryPair& pair, PairSide side,
                               const std::string& participant, Regime regime,
                               const AttributeSchema& schema);

/// Labels for a dummy-question sequence: attributes all-default, the
/// story's conflict target, and the regime's story label for a
/// participant mentioned nowhere.
SequenceLabels assemble_dummy_labels(const StoryPair& pair, PairSide side, Regime regime,
                                     const AttributeSchema& schema);

/// Case-insensitive surface containment in either conflict sentence; the
/// participant-centric regime keys on this.
bool participant_in_conflict(const AnnotatedStory& story, const std::string& surface);

/// Sentence-centric story selection: the story whose conflict
/// probabilities sum lower wins; exact ties pick the first story.
int predict_sentence_centric(const Eigen::VectorXd& conflict_first,
                             const Eigen::VectorXd& conflict_second);

}  // namespace procstory
