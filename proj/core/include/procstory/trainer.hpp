#pragma once

#include <string>
#include <vector>

#include "procstory/loss.hpp"
#include "procstory/model.hpp"
#include "procstory/optimizer.hpp"

namespace procstory {

struct EpochMetrics {
  int epoch = 0;
  LossBreakdown mean_loss;
  double accuracy = 0.0;
};

struct TrainResult {
  int best_epoch = 0;
  double best_accuracy = 0.0;
  std::vector<EpochMetrics> history;
};

/// Runs cfg.epochs over the pair dataset, one optimizer step per
/// batch_size * grad_accumulation participant sequences, and leaves the
/// heads of the epoch with the best in-domain accuracy installed in the
/// model. Deterministic for a fixed seed and encoder. Aborts with a
/// diagnostic if the loss stops being finite.
TrainResult train(const std::vector<StoryPair>& dataset, TieredModel& model,
                  const RegimeConfig& cfg, const std::string& metrics_log_path = "");

/// Fraction of pairs whose plausible story wins under the regime's
/// decision rule (negative conflict sum for sentence-centric, the mode's
/// plausibility comparison otherwise).
double evaluate_accuracy(const TieredModel& model, const std::vector<StoryPair>& dataset,
                         Regime regime);

}  // namespace procstory
