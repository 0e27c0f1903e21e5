#include "procstory/model.hpp"

#include <algorithm>

#include "procstory/error.hpp"

namespace procstory {

std::string to_string(ModelMode mode) {
  return mode == ModelMode::single ? "single" : "joint";
}

ModelMode model_mode_from_string(const std::string& name) {
  if (name == "single") return ModelMode::single;
  if (name == "joint") return ModelMode::joint;
  throw ConfigError("unknown model mode: " + name);
}

StoryDecision aggregate(const std::vector<TieredPrediction>& predictions, ModelMode mode) {
  if (predictions.empty()) {
    throw ValidationError("cannot aggregate over zero participant predictions");
  }
  StoryDecision decision;
  decision.conflict_mean = Eigen::VectorXd::Zero(predictions[0].conflict.size());
  decision.plausibility_mean.setZero();
  for (const TieredPrediction& p : predictions) {
    if (p.conflict.size() != decision.conflict_mean.size()) {
      throw DimensionError("participant predictions disagree on conflict pair count");
    }
    decision.conflict_mean += p.conflict;
    decision.plausibility_mean += p.plausibility;
  }
  decision.conflict_mean /= static_cast<double>(predictions.size());
  decision.plausibility_mean /= static_cast<double>(predictions.size());
  (void)mode;  // both modes average; the caller interprets plausibility_mean

  if (decision.conflict_mean.size() > 0) {
    // Lowest pair index wins ties.
    int best = 0;
    for (int i = 1; i < decision.conflict_mean.size(); ++i) {
      if (decision.conflict_mean(i) > decision.conflict_mean(best)) best = i;
    }
    int n = 1;
    while (conflict_pair_count(n) < decision.conflict_mean.size()) ++n;
    decision.conflict_pair = conflict_pair_from_index(best, n);
  }
  return decision;
}

TieredModel::TieredModel(AttributeSchema schema, std::shared_ptr<Encoder> encoder,
                         ModelOptions options)
    : schema_(std::move(schema)),
      encoder_(std::move(encoder)),
      options_(std::move(options)),
      tokenizer_() {
  if (!encoder_) throw ConfigError("model requires an encoder");
  if (options_.hidden <= 0) options_.hidden = encoder_->dim();
  if (options_.sequence.max_tokens <= 0) {
    options_.sequence.max_tokens = encoder_->max_tokens();
  }
  heads_ = init_heads(schema_, encoder_->dim(), options_.hidden, options_.head_seed);
}

TokenizedInput TieredModel::sequence_for(const std::vector<Sentence>& sentences,
                                         const std::string& surface, int step) const {
  return build_participant_sequence(sentences, surface, step, tokenizer_, options_.sequence);
}

StepRepresentations TieredModel::representations_for(const TokenizedInput& step_input) const {
  Eigen::MatrixXd encoded = encoder_->encode(step_input);
  StepRepresentations reps;
  reps.rows = Eigen::MatrixXd(1, encoded.cols());
  reps.rows.row(0) = encoded.row(step_input.head_token(step_input.step_index));
  return reps;
}

StepRepresentations TieredModel::stack_steps(const std::vector<TokenizedInput>& steps) const {
  StepRepresentations reps;
  reps.rows = Eigen::MatrixXd(static_cast<Eigen::Index>(steps.size()), encoder_->dim());
  for (std::size_t j = 0; j < steps.size(); ++j) {
    Eigen::MatrixXd encoded = encoder_->encode(steps[j]);
    reps.rows.row(static_cast<Eigen::Index>(j)) =
        encoded.row(steps[j].head_token(steps[j].step_index));
  }
  return reps;
}

StepRepresentations TieredModel::step_representations(const std::vector<Sentence>& sentences,
                                                      const std::string& surface) const {
  std::vector<TokenizedInput> steps;
  for (int j = 0; j < static_cast<int>(sentences.size()); ++j) {
    steps.push_back(build_participant_sequence(sentences, surface, j, tokenizer_,
                                               options_.sequence));
  }
  return stack_steps(steps);
}

StepRepresentations TieredModel::dummy_representations(
    const std::vector<Sentence>& sentences) const {
  std::vector<TokenizedInput> steps;
  for (int j = 0; j < static_cast<int>(sentences.size()); ++j) {
    steps.push_back(build_dummy_sequence(sentences, j, tokenizer_, options_.sequence));
  }
  return stack_steps(steps);
}

ParticipantStates TieredModel::states_from(const std::string& surface,
                                           const TieredPrediction& prediction) const {
  ParticipantStates states;
  states.participant = surface;
  const int steps = static_cast<int>(prediction.attributes.precondition.empty()
                                         ? 0
                                         : prediction.attributes.precondition[0].rows());
  auto argmax_rows = [steps](const Eigen::MatrixXd& probs) {
    std::vector<int> labels(static_cast<std::size_t>(steps), 0);
    for (int s = 0; s < steps; ++s) {
      Eigen::Index best = 0;
      probs.row(s).maxCoeff(&best);
      labels[static_cast<std::size_t>(s)] = static_cast<int>(best);
    }
    return labels;
  };
  for (int a = 0; a < schema_.size(); ++a) {
    states.precondition.push_back(
        argmax_rows(prediction.attributes.precondition[static_cast<std::size_t>(a)]));
    states.effect.push_back(
        argmax_rows(prediction.attributes.effect[static_cast<std::size_t>(a)]));
  }
  return states;
}

StoryPrediction TieredModel::predict_story(const AnnotatedStory& story) const {
  StoryPrediction out;
  std::vector<const Participant*> participants;
  for (const Participant& p : story.participants) participants.push_back(&p);

  if (participants.empty()) {
    // External stories may carry no physical participants; one dummy
    // sequence keeps aggregation non-empty.
    out.participants.push_back(options_.sequence.dummy_surface);
    StepRepresentations reps = dummy_representations(story.sentences);
    TieredPrediction prediction{classify_attributes(heads_, reps),
                                detect_conflicts(heads_, reps),
                                score_story_single(heads_, reps)};
    out.states.push_back(states_from(options_.sequence.dummy_surface, prediction));
    out.per_participant.push_back(std::move(prediction));
  } else {
    for (const Participant* p : participants) {
      StepRepresentations reps = step_representations(story.sentences, p->surface);
      TieredPrediction prediction{classify_attributes(heads_, reps),
                                  detect_conflicts(heads_, reps),
                                  score_story_single(heads_, reps)};
      out.participants.push_back(p->surface);
      out.states.push_back(states_from(p->surface, prediction));
      out.per_participant.push_back(std::move(prediction));
    }
  }
  out.decision = aggregate(out.per_participant, ModelMode::single);
  return out;
}

PairDecision TieredModel::predict_pair(const AnnotatedStory& first,
                                       const AnnotatedStory& second) const {
  PairDecision decision;
  if (options_.mode == ModelMode::single) {
    decision.first = predict_story(first);
    decision.second = predict_story(second);
    double p_first = decision.first.decision.plausibility_mean(1);
    double p_second = decision.second.decision.plausibility_mean(1);
    decision.p_first = p_first;
    decision.choice = p_first >= p_second ? 0 : 1;
    return decision;
  }

  std::vector<JointInputPair> pairs =
      build_joint_pairs(first, second, tokenizer_, options_.sequence);
  if (pairs.empty()) {
    JointInputPair dummy;
    dummy.surface = options_.sequence.dummy_surface;
    dummy.dummy_first = dummy.dummy_second = true;
    for (int j = 0; j < first.step_count(); ++j) {
      dummy.first_steps.push_back(
          build_dummy_sequence(first.sentences, j, tokenizer_, options_.sequence));
    }
    for (int j = 0; j < second.step_count(); ++j) {
      dummy.second_steps.push_back(
          build_dummy_sequence(second.sentences, j, tokenizer_, options_.sequence));
    }
    pairs.push_back(std::move(dummy));
  }

  std::vector<TieredPrediction> first_preds;
  std::vector<TieredPrediction> second_preds;
  double p_first_sum = 0.0;
  for (const JointInputPair& pair : pairs) {
    StepRepresentations reps_first = stack_steps(pair.first_steps);
    StepRepresentations reps_second = stack_steps(pair.second_steps);
    Eigen::Vector2d choice = score_story_joint(heads_, reps_first, reps_second);
    p_first_sum += choice(0);

    first_preds.push_back(TieredPrediction{classify_attributes(heads_, reps_first),
                                           detect_conflicts(heads_, reps_first), choice});
    Eigen::Vector2d reversed(choice(1), choice(0));
    second_preds.push_back(TieredPrediction{classify_attributes(heads_, reps_second),
                                            detect_conflicts(heads_, reps_second),
                                            reversed});
    decision.first.participants.push_back(pair.dummy_first ? options_.sequence.dummy_surface
                                                           : pair.surface);
    decision.second.participants.push_back(
        pair.dummy_second ? options_.sequence.dummy_surface : pair.surface);
  }
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    decision.first.states.push_back(
        states_from(decision.first.participants[i], first_preds[i]));
    decision.second.states.push_back(
        states_from(decision.second.participants[i], second_preds[i]));
  }
  decision.first.per_participant = std::move(first_preds);
  decision.second.per_participant = std::move(second_preds);
  decision.first.decision = aggregate(decision.first.per_participant, ModelMode::joint);
  decision.second.decision = aggregate(decision.second.per_participant, ModelMode::joint);

  decision.p_first = p_first_sum / static_cast<double>(pairs.size());
  decision.choice = decision.p_first >= 0.5 ? 0 : 1;
  return decision;
}

}  // namespace procstory
