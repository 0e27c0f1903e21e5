#include "procstory/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

#include <json.hpp>

#include "procstory/error.hpp"
#include "procstory/rng.hpp"

namespace procstory {

namespace {

struct SingleItem {
  StepRepresentations reps;
  SequenceLabels labels;
};

struct JointItem {
  StepRepresentations first;
  StepRepresentations second;
  SequenceLabels labels_first;
  SequenceLabels labels_second;
};

/// Everything the loop needs for one pair, with encoder outputs computed
/// once up front (the encoder is a fixed feature extractor during
/// training).
struct PairBatch {
  std::vector<SingleItem> singles;
  std::vector<JointItem> joints;
  // Cached decision inputs for the epoch-end accuracy pass.
  std::vector<const StepRepresentations*> plausible_reps;
  std::vector<const StepRepresentations*> implausible_reps;
};

std::vector<PairBatch> precompute(const std::vector<StoryPair>& dataset,
                                  const TieredModel& model, const RegimeConfig& cfg) {
  std::vector<PairBatch> batches;
  batches.reserve(dataset.size());
  const AttributeSchema& schema = model.schema();

  for (const StoryPair& pair : dataset) {
    PairBatch batch;
    if (model.mode() == ModelMode::single) {
      auto add_story = [&](const AnnotatedStory& story, PairSide side) {
        if (story.participants.empty()) {
          SingleItem item{model.dummy_representations(story.sentences),
                          assemble_dummy_labels(pair, side, cfg.regime, schema)};
          batch.singles.push_back(std::move(item));
          return;
        }
        for (const Participant& p : story.participants) {
          SingleItem item{model.step_representations(story.sentences, p.surface),
                          assemble_labels(pair, side, p.surface, cfg.regime, schema)};
          batch.singles.push_back(std::move(item));
        }
      };
      add_story(pair.plausible, PairSide::plausible);
      std::size_t first_implausible = batch.singles.size();
      add_story(pair.implausible, PairSide::implausible);
      batches.push_back(std::move(batch));
      PairBatch& stored = batches.back();
      for (std::size_t i = 0; i < stored.singles.size(); ++i) {
        (i < first_implausible ? stored.plausible_reps : stored.implausible_reps)
            .push_back(&stored.singles[i].reps);
      }
    } else {
      std::vector<JointInputPair> joint_inputs = build_joint_pairs(
          pair.plausible, pair.implausible, model.tokenizer(), model.options().sequence);
      if (joint_inputs.empty()) {
        JointInputPair dummy;
        dummy.surface = model.options().sequence.dummy_surface;
        dummy.dummy_first = dummy.dummy_second = true;
        for (int j = 0; j < pair.plausible.step_count(); ++j) {
          dummy.first_steps.push_back(build_dummy_sequence(
              pair.plausible.sentences, j, model.tokenizer(), model.options().sequence));
        }
        for (int j = 0; j < pair.implausible.step_count(); ++j) {
          dummy.second_steps.push_back(build_dummy_sequence(
              pair.implausible.sentences, j, model.tokenizer(), model.options().sequence));
        }
        joint_inputs.push_back(std::move(dummy));
      }
      for (const JointInputPair& input : joint_inputs) {
        JointItem item;
        Eigen::MatrixXd first_rows(pair.plausible.step_count(), model.encoder().dim());
        for (std::size_t j = 0; j < input.first_steps.size(); ++j) {
          Eigen::MatrixXd encoded = model.encoder().encode(input.first_steps[j]);
          first_rows.row(static_cast<Eigen::Index>(j)) =
              encoded.row(input.first_steps[j].head_token(
                  input.first_steps[j].step_index));
        }
        Eigen::MatrixXd second_rows(pair.implausible.step_count(), model.encoder().dim());
        for (std::size_t j = 0; j < input.second_steps.size(); ++j) {
          Eigen::MatrixXd encoded = model.encoder().encode(input.second_steps[j]);
          second_rows.row(static_cast<Eigen::Index>(j)) =
              encoded.row(input.second_steps[j].head_token(
                  input.second_steps[j].step_index));
        }
        item.first.rows = std::move(first_rows);
        item.second.rows = std::move(second_rows);
        item.labels_first =
            input.dummy_first
                ? assemble_dummy_labels(pair, PairSide::plausible, cfg.regime, schema)
                : assemble_labels(pair, PairSide::plausible, input.surface, cfg.regime,
                                  schema);
        item.labels_second =
            input.dummy_second
                ? assemble_dummy_labels(pair, PairSide::implausible, cfg.regime, schema)
                : assemble_labels(pair, PairSide::implausible, input.surface, cfg.regime,
                                  schema);
        batch.joints.push_back(std::move(item));
      }
      batches.push_back(std::move(batch));
      PairBatch& stored = batches.back();
      for (JointItem& item : stored.joints) {
        stored.plausible_reps.push_back(&item.first);
        stored.implausible_reps.push_back(&item.second);
      }
    }
  }
  return batches;
}

/// Decision over cached representations, mirroring TieredModel::predict_pair.
bool pair_correct(const TieredHeads& heads, const PairBatch& batch, ModelMode mode,
                  Regime regime) {
  if (regime == Regime::sentence_centric) {
    auto mean_conflict = [&heads](const std::vector<const StepRepresentations*>& reps) {
      Eigen::VectorXd sum;
      for (const StepRepresentations* r : reps) {
        Eigen::VectorXd c = detect_conflicts(heads, *r);
        if (sum.size() == 0) sum = Eigen::VectorXd::Zero(c.size());
        sum += c;
      }
      return Eigen::VectorXd(sum / static_cast<double>(reps.size()));
    };
    return predict_sentence_centric(mean_conflict(batch.plausible_reps),
                                    mean_conflict(batch.implausible_reps)) == 0;
  }

  if (mode == ModelMode::single) {
    auto mean_plausible = [&heads](const std::vector<const StepRepresentations*>& reps) {
      double sum = 0.0;
      for (const StepRepresentations* r : reps) sum += score_story_single(heads, *r)(1);
      return sum / static_cast<double>(reps.size());
    };
    return mean_plausible(batch.plausible_reps) >= mean_plausible(batch.implausible_reps);
  }

  double p_first = 0.0;
  for (const JointItem& item : batch.joints) {
    p_first += score_story_joint(heads, item.first, item.second)(0);
  }
  p_first /= static_cast<double>(batch.joints.size());
  return p_first >= 0.5;
}

double dataset_accuracy(const TieredHeads& heads, const std::vector<PairBatch>& batches,
                        ModelMode mode, Regime regime) {
  if (batches.empty()) return 0.0;
  int correct = 0;
  for (const PairBatch& batch : batches) {
    if (pair_correct(heads, batch, mode, regime)) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(batches.size());
}

void check_finite(const LossBreakdown& loss, int epoch, std::size_t pair_index) {
  if (!std::isfinite(loss.total)) {
    throw Error("training diverged: non-finite loss at epoch " + std::to_string(epoch) +
                ", pair " + std::to_string(pair_index));
  }
}

}  // namespace

double evaluate_accuracy(const TieredModel& model, const std::vector<StoryPair>& dataset,
                         Regime regime) {
  if (dataset.empty()) throw ValidationError("cannot evaluate over an empty dataset");
  int correct = 0;
  for (const StoryPair& pair : dataset) {
    if (regime == Regime::sentence_centric) {
      PairDecision decision = model.predict_pair(pair.plausible, pair.implausible);
      if (predict_sentence_centric(decision.first.decision.conflict_mean,
                                   decision.second.decision.conflict_mean) == 0) {
        ++correct;
      }
    } else {
      if (model.predict_pair(pair.plausible, pair.implausible).choice == 0) ++correct;
    }
  }
  return static_cast<double>(correct) / static_cast<double>(dataset.size());
}

TrainResult train(const std::vector<StoryPair>& dataset, TieredModel& model,
                  const RegimeConfig& cfg, const std::string& metrics_log_path) {
  cfg.validate();
  if (dataset.empty()) throw ValidationError("training dataset is empty");
  if (model.mode() == ModelMode::joint && cfg.regime == Regime::participant_centric) {
    throw ConfigError(
        "joint story modeling cannot be trained with the participant-centric regime");
  }

  std::vector<PairBatch> batches = precompute(dataset, model, cfg);

  std::ofstream log;
  if (!metrics_log_path.empty()) {
    log.open(metrics_log_path, std::ios::binary);
    if (!log) throw ConfigError("cannot write metrics log: " + metrics_log_path);
  }

  TrainResult result;
  TieredHeads best = model.heads();
  double best_accuracy = -1.0;
  int best_epoch = 0;

  AdamWConfig opt_config;
  opt_config.learning_rate = cfg.learning_rate;
  opt_config.weight_decay = cfg.weight_decay;
  AdamW optimizer(opt_config);

  TieredHeads grads = model.heads().zeros_like();
  const int flush_every = cfg.batch_size * cfg.grad_accumulation;

  std::vector<std::size_t> order(dataset.size());
  std::iota(order.begin(), order.end(), 0);

  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    Rng rng = derive_rng(cfg.seed, static_cast<std::uint64_t>(epoch));
    std::shuffle(order.begin(), order.end(), rng);

    LossBreakdown epoch_loss;
    std::size_t sequences = 0;
    int accumulated = 0;

    auto maybe_step = [&](bool force) {
      if (accumulated == 0) return;
      if (!force && accumulated < flush_every) return;
      grads.for_each([&](const std::string&, Eigen::MatrixXd& g) {
        g /= static_cast<double>(accumulated);
      });
      optimizer.step(model.heads(), grads);
      grads.for_each([](const std::string&, Eigen::MatrixXd& g) { g.setZero(); });
      accumulated = 0;
    };

    for (std::size_t pair_index : order) {
      PairBatch& batch = batches[pair_index];
      for (const SingleItem& item : batch.singles) {
        LossBreakdown loss =
            sequence_loss(model.heads(), item.reps, item.labels, cfg, &grads);
        check_finite(loss, epoch, pair_index);
        epoch_loss.total += loss.total;
        epoch_loss.plausibility += loss.plausibility;
        epoch_loss.conflict += loss.conflict;
        epoch_loss.precondition += loss.precondition;
        epoch_loss.effect += loss.effect;
        ++sequences;
        ++accumulated;
        maybe_step(false);
      }
      for (const JointItem& item : batch.joints) {
        LossBreakdown loss = pair_loss(model.heads(), item.first, item.second,
                                       item.labels_first, item.labels_second,
                                       /*plausible_index=*/0, cfg, &grads);
        check_finite(loss, epoch, pair_index);
        epoch_loss.total += loss.total;
        epoch_loss.plausibility += loss.plausibility;
        epoch_loss.conflict += loss.conflict;
        epoch_loss.precondition += loss.precondition;
        epoch_loss.effect += loss.effect;
        ++sequences;
        ++accumulated;
        maybe_step(false);
      }
    }
    maybe_step(true);

    const double count = static_cast<double>(std::max<std::size_t>(sequences, 1));
    epoch_loss.total /= count;
    epoch_loss.plausibility /= count;
    epoch_loss.conflict /= count;
    epoch_loss.precondition /= count;
    epoch_loss.effect /= count;

    double accuracy = dataset_accuracy(model.heads(), batches, model.mode(), cfg.regime);
    result.history.push_back({epoch, epoch_loss, accuracy});

    if (log.is_open()) {
      nlohmann::json line = {{"epoch", epoch},
                             {"loss_total", epoch_loss.total},
                             {"loss_plausibility", epoch_loss.plausibility},
                             {"loss_conflict", epoch_loss.conflict},
                             {"loss_precondition", epoch_loss.precondition},
                             {"loss_effect", epoch_loss.effect},
                             {"accuracy", accuracy}};
      log << line.dump() << "\n";
    }

    if (accuracy > best_accuracy) {
      best_accuracy = accuracy;
      best_epoch = epoch;
      best = model.heads();
    }
  }

  if (cfg.epochs > 0) {
    model.heads() = best;
    result.best_accuracy = best_accuracy;
    result.best_epoch = best_epoch;
  } else {
    result.best_accuracy =
        dataset_accuracy(model.heads(), batches, model.mode(), cfg.regime);
    result.best_epoch = 0;
  }
  return result;
}

}  // namespace procstory
