#pragma once

#include "procstory/heads.hpp"
#include "procstory/labels.hpp"
#include "procstory/model.hpp"

namespace procstory {

/// Component losses before weighting plus the weighted total:
/// total = w_plau * plausibility + w_confl * conflict
///       + w_prec * precondition + w_effe * effect
/// where precondition/effect already carry the 1/A average over attributes
/// and conflict is the mean binary cross-entropy over sentence pairs.
struct LossBreakdown {
  double plausibility = 0.0;
  double conflict = 0.0;
  double precondition = 0.0;
  double effect = 0.0;
  double total = 0.0;
};

/// Loss of an already-computed prediction. The plausibility term reads
/// labels.story_label against prediction.plausibility and is skipped when
/// the label is absent (sentence-centric).
LossBreakdown compute_loss(const TieredPrediction& prediction, const SequenceLabels& labels,
                           const RegimeConfig& cfg);

/// Forward + analytic backward for one sequence in single-story mode.
/// Gradients of the weighted total with respect to every head parameter
/// are accumulated into `grads` when non-null.
LossBreakdown sequence_loss(const TieredHeads& heads, const StepRepresentations& reps,
                            const SequenceLabels& labels, const RegimeConfig& cfg,
                            TieredHeads* grads);

/// Joint-mode step: both sides contribute attribute and conflict terms
/// (averaged), the plausibility term is the cross-entropy of the shared
/// pair scorer's softmax against `plausible_index`.
LossBreakdown pair_loss(const TieredHeads& heads, const StepRepresentations& first,
                        const StepRepresentations& second, const SequenceLabels& labels_first,
                        const SequenceLabels& labels_second, int plausible_index,
                        const RegimeConfig& cfg, TieredHeads* grads);

}  // namespace procstory
