#include "procstory/labels.hpp"

#include <cmath>

#include "procstory/error.hpp"
#include "procstory/heads.hpp"
#include "procstory/text.hpp"

namespace procstory {

std::string to_string(Regime regime) {
  switch (regime) {
    case Regime::story_centric: return "story_centric";
    case Regime::participant_centric: return "participant_centric";
    case Regime::sentence_centric: return "sentence_centric";
  }
  return "story_centric";
}

Regime regime_from_string(const std::string& name) {
  if (name == "story_centric") return Regime::story_centric;
  if (name == "participant_centric") return Regime::participant_centric;
  if (name == "sentence_centric") return Regime::sentence_centric;
  throw ConfigError("unknown training regime: " + name);
}

void RegimeConfig::validate() const {
  for (double w : {w_precondition, w_effect, w_conflict, w_plausibility}) {
    if (w < 0) throw ConfigError("loss weights must be non-negative");
  }
  double sum = w_precondition + w_effect + w_conflict + w_plausibility;
  if (std::abs(sum - 1.0) > 1e-9) {
    throw ConfigError("loss weights must sum to 1, got " + std::to_string(sum));
  }
  if (regime == Regime::sentence_centric && w_plausibility != 0.0) {
    throw ConfigError("sentence-centric training requires w_plausibility = 0");
  }
  if (epochs < 0) throw ConfigError("epochs must be >= 0");
  if (grad_accumulation < 1) throw ConfigError("grad_accumulation must be >= 1");
  if (batch_size < 1) throw ConfigError("batch_size must be >= 1");
}

RegimeConfig RegimeConfig::defaults_for(Regime regime) {
  RegimeConfig cfg;
  cfg.regime = regime;
  if (regime == Regime::sentence_centric) {
    cfg.w_precondition = 0.4;
    cfg.w_effect = 0.4;
    cfg.w_conflict = 0.2;
    cfg.w_plausibility = 0.0;
  }
  return cfg;
}

bool participant_in_conflict(const AnnotatedStory& story, const std::string& surface) {
  if (!story.conflict) return false;
  std::string needle = to_lower(surface);
  for (int index : {story.conflict->first, story.conflict->second}) {
    const std::string haystack =
        to_lower(story.sentences[static_cast<std::size_t>(index)].text);
    if (haystack.find(needle) != std::string::npos) return true;
  }
  return false;
}

namespace {

SequenceLabels base_labels(const AnnotatedStory& story, const std::string& participant,
                           const AttributeSchema& schema, bool copy_annotations) {
  const int n = story.step_count();
  SequenceLabels labels;
  labels.precondition.assign(static_cast<std::size_t>(schema.size()),
                             std::vector<int>(static_cast<std::size_t>(n), 0));
  labels.effect = labels.precondition;

  if (copy_annotations) {
    for (const StateAnnotation& a : story.annotations) {
      if (a.participant != participant) continue;
      int attr = schema.index_of(a.attribute);
      if (attr < 0) throw ValidationError("annotation attribute outside schema: " + a.attribute);
      int prec = schema.precondition_label_index(attr, a.precondition);
      int eff = schema.effect_label_index(attr, a.effect);
      if (prec < 0 || eff < 0) {
        throw ValidationError("annotation label outside schema space for " + a.attribute);
      }
      labels.precondition[static_cast<std::size_t>(attr)][static_cast<std::size_t>(a.step)] =
          prec;
      labels.effect[static_cast<std::size_t>(attr)][static_cast<std::size_t>(a.step)] = eff;
    }
  }

  labels.conflict_target = Eigen::VectorXd::Zero(conflict_pair_count(n));
  if (story.conflict) {
    labels.conflict_target(
        conflict_pair_index(story.conflict->first, story.conflict->second, n)) = 1.0;
  }
  return labels;
}

void attach_story_label(SequenceLabels& labels, const AnnotatedStory& story,
                        const std::string& participant, Regime regime) {
  switch (regime) {
    case Regime::sentence_centric:
      labels.story_label.reset();
      break;
    case Regime::story_centric:
      labels.story_label = story.label.value_or(kPlausible);
      break;
    case Regime::participant_centric:
      if (story.label.value_or(kPlausible) == kImplausible &&
          participant_in_conflict(story, participant)) {
        labels.story_label = kImplausible;
      } else {
        labels.story_label = kPlausible;
      }
      break;
  }
}

}  // namespace

SequenceLabels assemble_labels(const StoryPair& pair, PairSide side,
                               const std::string& participant, Regime regime,
                               const AttributeSchema& schema) {
  const AnnotatedStory& story =
      side == PairSide::plausible ? pair.plausible : pair.implausible;
  if (!story.find_participant(participant)) {
    throw ValidationError("participant '" + participant + "' not in story of pair '" +
                          pair.pair_id + "'");
  }
  SequenceLabels labels = base_labels(story, participant, schema, true);
  attach_story_label(labels, story, participant, regime);
  return labels;
}

SequenceLabels assemble_dummy_labels(const StoryPair& pair, PairSide side, Regime regime,
                                     const AttributeSchema& schema) {
  const AnnotatedStory& story =
      side == PairSide::plausible ? pair.plausible : pair.implausible;
  SequenceLabels labels = base_labels(story, "", schema, false);
  attach_story_label(labels, story, "", regime);
  return labels;
}

int predict_sentence_centric(const Eigen::VectorXd& conflict_first,
                             const Eigen::VectorXd& conflict_second) {
  double score_first = -conflict_first.sum();
  double score_second = -conflict_second.sum();
  return score_first >= score_second ? 0 : 1;
}

}  // namespace procstory
