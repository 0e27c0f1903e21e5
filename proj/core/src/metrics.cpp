#include "procstory/metrics.hpp"

#include "procstory/error.hpp"
#include "procstory/labels.hpp"

namespace procstory {

namespace {

const ParticipantStates* find_states(const StoryPrediction& prediction,
                                     const std::string& surface) {
  for (const ParticipantStates& states : prediction.states) {
    if (states.participant == surface) return &states;
  }
  return nullptr;
}

/// Gold effect states at the first conflict sentence and precondition
/// states at the second must be reproduced for every conflicting
/// participant.
bool states_verified(const PairDecision& prediction, const StoryPair& gold,
                     const AttributeSchema& schema) {
  const AnnotatedStory& story = gold.implausible;
  const ConflictPair conflict = *story.conflict;

  for (const Participant& participant : story.participants) {
    if (!participant_in_conflict(story, participant.surface)) continue;
    const ParticipantStates* predicted = find_states(prediction.second, participant.surface);
    for (const StateAnnotation& a : story.annotations) {
      if (a.participant != participant.surface) continue;
      const int attr = schema.index_of(a.attribute);
      if (attr < 0) continue;
      if (a.step == conflict.first) {
        int gold_label = schema.effect_label_index(attr, a.effect);
        if (!predicted ||
            predicted->effect[static_cast<std::size_t>(attr)]
                             [static_cast<std::size_t>(a.step)] != gold_label) {
          return false;
        }
      }
      if (a.step == conflict.second) {
        int gold_label = schema.precondition_label_index(attr, a.precondition);
        if (!predicted ||
            predicted->precondition[static_cast<std::size_t>(attr)]
                                   [static_cast<std::size_t>(a.step)] != gold_label) {
          return false;
        }
      }
    }
  }
  return true;
}

}  // namespace

TieredMetrics score_tiered(const std::vector<PairDecision>& predictions,
                           const std::vector<StoryPair>& gold,
                           const AttributeSchema& schema) {
  if (predictions.size() != gold.size()) {
    throw ValidationError("predictions and gold pairs are misaligned: " +
                          std::to_string(predictions.size()) + " vs " +
                          std::to_string(gold.size()));
  }
  if (gold.empty()) throw ValidationError("cannot score an empty pair set");

  int accurate = 0;
  int consistent = 0;
  int verified = 0;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    const PairDecision& prediction = predictions[i];
    const StoryPair& pair = gold[i];

    const bool story_ok = prediction.choice == 0;
    if (!story_ok) continue;
    ++accurate;

    if (!pair.implausible.conflict) continue;
    const ConflictPair predicted_conflict{prediction.second.decision.conflict_pair.first,
                                          prediction.second.decision.conflict_pair.second};
    if (!(predicted_conflict == *pair.implausible.conflict)) continue;
    ++consistent;

    if (states_verified(prediction, pair, schema)) ++verified;
  }

  const double total = static_cast<double>(gold.size());
  return {accurate / total, consistent / total, verified / total};
}

ExtractionMetrics score_extraction(const std::vector<std::set<std::string>>& predicted,
                                   const std::vector<std::set<std::string>>& gold) {
  if (predicted.size() != gold.size()) {
    throw ValidationError("predicted and gold participant sets are misaligned");
  }
  std::size_t true_positive = 0;
  std::size_t predicted_total = 0;
  std::size_t gold_total = 0;
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    predicted_total += predicted[i].size();
    gold_total += gold[i].size();
    for (const std::string& surface : predicted[i]) {
      if (gold[i].count(surface)) ++true_positive;
    }
  }
  ExtractionMetrics metrics;
  metrics.precision = predicted_total == 0
                          ? 0.0
                          : static_cast<double>(true_positive) /
                                static_cast<double>(predicted_total);
  metrics.recall = gold_total == 0 ? 0.0
                                   : static_cast<double>(true_positive) /
                                         static_cast<double>(gold_total);
  return metrics;
}

}  // namespace procstory
