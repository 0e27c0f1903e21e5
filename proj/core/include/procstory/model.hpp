#pragma once

#include <memory>
#include <string>
#include <vector>

#include "procstory/encoder.hpp"
#include "procstory/heads.hpp"
#include "procstory/schema.hpp"
#include "procstory/sequence.hpp"
#include "procstory/story.hpp"
#include "procstory/tokenizer.hpp"

namespace procstory {

enum class ModelMode { single, joint };

std::string to_string(ModelMode mode);
ModelMode model_mode_from_string(const std::string& name);

/// Everything one participant sequence predicts: attribute distributions
/// per step, conflict probabilities per sentence pair, and a plausibility
/// distribution (2-class in single mode; (p_first, p_second) over the
/// story pair in joint mode).
struct TieredPrediction {
  AttributeDistributions attributes;
  Eigen::VectorXd conflict;
  Eigen::Vector2d plausibility;
};

/// Participant-averaged story outputs.
struct StoryDecision {
  Eigen::VectorXd conflict_mean;
  std::pair<int, int> conflict_pair{-1, -1};  // {-1,-1} for single-sentence stories
  Eigen::Vector2d plausibility_mean;
};

/// Mean over participants; the predicted conflict pair is the argmax with
/// lowest pair index winning ties.
StoryDecision aggregate(const std::vector<TieredPrediction>& predictions, ModelMode mode);

/// Argmax attribute labels per (attribute, step) for one participant.
struct ParticipantStates {
  std::string participant;
  std::vector<std::vector<int>> precondition;  // [attribute][step] -> label index
  std::vector<std::vector<int>> effect;
};

struct StoryPrediction {
  std::vector<std::string> participants;  // order matches per_participant
  std::vector<TieredPrediction> per_participant;
  std::vector<ParticipantStates> states;
  StoryDecision decision;
};

struct PairDecision {
  int choice = 0;        // 0: first story judged plausible
  double p_first = 0.5;  // aggregated probability that the first story wins
  StoryPrediction first;
  StoryPrediction second;
};

struct ModelOptions {
  ModelMode mode = ModelMode::single;
  int hidden = 0;  // 0: use encoder dim
  SequenceOptions sequence;
  std::uint64_t head_seed = 11;
};

/// The stratified reasoning network: encoder contract underneath, three
/// heads on top, participant-level aggregation above them.
class TieredModel {
 public:
  TieredModel(AttributeSchema schema, std::shared_ptr<Encoder> encoder,
              ModelOptions options);

  const AttributeSchema& schema() const { return schema_; }
  const Encoder& encoder() const { return *encoder_; }
  std::shared_ptr<Encoder> encoder_ptr() const { return encoder_; }
  const Tokenizer& tokenizer() const { return tokenizer_; }
  ModelMode mode() const { return options_.mode; }
  const ModelOptions& options() const { return options_; }
  TieredHeads& heads() { return heads_; }
  const TieredHeads& heads() const { return heads_; }

  /// Encodes the participant-conditioned sequence once per step and reads
  /// each step's head token, producing the n x d matrix the heads consume.
  StepRepresentations step_representations(const std::vector<Sentence>& sentences,
                                           const std::string& surface) const;
  StepRepresentations dummy_representations(const std::vector<Sentence>& sentences) const;
  StepRepresentations representations_for(const TokenizedInput& step_input) const;

  /// Single-story tiered outputs for every participant (a dummy stands in
  /// when the story has none), aggregated.
  StoryPrediction predict_story(const AnnotatedStory& story) const;

  /// Full pair decision under the configured mode. Deterministic given
  /// weights; exactly tied scores choose the first story.
  PairDecision predict_pair(const AnnotatedStory& first, const AnnotatedStory& second) const;

  TokenizedInput sequence_for(const std::vector<Sentence>& sentences,
                              const std::string& surface, int step) const;

 private:
  StepRepresentations stack_steps(const std::vector<TokenizedInput>& steps) const;
  ParticipantStates states_from(const std::string& surface,
                                const TieredPrediction& prediction) const;

  AttributeSchema schema_;
  std::shared_ptr<Encoder> encoder_;
  ModelOptions options_;
  Tokenizer tokenizer_;
  TieredHeads heads_;
};

}  // namespace procstory
