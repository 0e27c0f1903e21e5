#pragma once

#include <set>
#include <string>
#include <vector>

#include "procstory/model.hpp"
#include "procstory/story.hpp"

namespace procstory {

/// Tiered fractions over evaluated pairs; verifiability <= consistency <=
/// accuracy by construction.
struct TieredMetrics {
  double accuracy = 0.0;
  double consistency = 0.0;
  double verifiability = 0.0;
};

/// predictions[i] must be the model's decision on gold[i] presented as
/// (plausible, implausible). Accuracy counts the correct story choice;
/// consistency additionally the exact conflict pair on the implausible
/// story; verifiability additionally the conflicting participants' gold
/// effect states in the first conflict sentence and precondition states
/// in the second.
TieredMetrics score_tiered(const std::vector<PairDecision>& predictions,
                           const std::vector<StoryPair>& gold,
                           const AttributeSchema& schema);

struct ExtractionMetrics {
  double precision = 0.0;
  double recall = 0.0;
};

/// Micro-averaged precision/recall over normalized participant surfaces.
ExtractionMetrics score_extraction(const std::vector<std::set<std::string>>& predicted,
                                   const std::vector<std::set<std::string>>& gold);

}  // namespace procstory
