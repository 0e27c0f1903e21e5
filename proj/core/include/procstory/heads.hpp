#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "procstory/schema.hpp"

namespace procstory {

/// One d-vector per story step, read from the head token of each
/// sentence across the per-step encodings.
struct StepRepresentations {
  Eigen::MatrixXd rows;  // n x d

  int steps() const { return static_cast<int>(rows.rows()); }
  int dim() const { return static_cast<int>(rows.cols()); }
};

/// Index of pair (i, j), i < j, in lexicographic pair order.
int conflict_pair_index(int i, int j, int n);
std::pair<int, int> conflict_pair_from_index(int index, int n);
int conflict_pair_count(int n);

/// Two-layer feed-forward classifier for one attribute direction.
/// logits = w2 * tanh(w1 * r + b1) + b2.
struct AttributeMlp {
  Eigen::MatrixXd w1;  // hidden x d
  Eigen::MatrixXd b1;  // hidden x 1
  Eigen::MatrixXd w2;  // labels x hidden
  Eigen::MatrixXd b2;  // labels x 1
};

/// All trainable parameters above the encoder. Vectors are stored as
/// column matrices so optimizer state and checkpoints treat every
/// parameter uniformly.
struct TieredHeads {
  std::vector<AttributeMlp> precondition;  // one per attribute
  std::vector<AttributeMlp> effect;
  Eigen::MatrixXd conflict_w;  // 2d x 1
  Eigen::MatrixXd conflict_b;  // 1 x 1
  Eigen::MatrixXd story_w;     // 2 x d
  Eigen::MatrixXd story_b;     // 2 x 1
  Eigen::MatrixXd pair_w;      // d x 1, shared scorer for joint mode
  Eigen::MatrixXd pair_b;      // 1 x 1

  int dim() const { return static_cast<int>(story_w.cols()); }
  int attribute_count() const { return static_cast<int>(precondition.size()); }

  /// Visits every parameter tensor under a stable name; the iteration
  /// order defines the checkpoint blob layout.
  void for_each(const std::function<void(const std::string&, Eigen::MatrixXd&)>& fn);
  void for_each(const std::function<void(const std::string&, const Eigen::MatrixXd&)>& fn) const;

  /// Same shapes, all zeros. Gradient accumulators start from this.
  TieredHeads zeros_like() const;
};

TieredHeads init_heads(const AttributeSchema& schema, int dim, int hidden,
                       std::uint64_t seed);
TieredHeads zero_heads(const AttributeSchema& schema, int dim, int hidden);

/// Per-attribute label distributions for every step: n x |labels| rows
/// summing to 1.
struct AttributeDistributions {
  std::vector<Eigen::MatrixXd> precondition;
  std::vector<Eigen::MatrixXd> effect;
};

AttributeDistributions classify_attributes(const TieredHeads& heads,
                                           const StepRepresentations& reps);

/// Sigmoid score per sentence pair (i, j), i < j, lexicographic order;
/// empty for single-sentence stories.
Eigen::VectorXd detect_conflicts(const TieredHeads& heads, const StepRepresentations& reps);

/// Mean-pooled story vector through the 2-class head:
/// (p_implausible, p_plausible).
Eigen::Vector2d score_story_single(const TieredHeads& heads, const StepRepresentations& reps);

/// Shared linear scorer on each story's mean vector, softmax over the two
/// scores: (p_first_plausible, p_second_plausible).
Eigen::Vector2d score_story_joint(const TieredHeads& heads, const StepRepresentations& first,
                                  const StepRepresentations& second);

Eigen::VectorXd softmax(const Eigen::VectorXd& logits);
double sigmoid(double x);

}  // namespace procstory
