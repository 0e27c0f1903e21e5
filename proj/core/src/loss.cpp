#include "procstory/loss.hpp"

#include <cmath>

#include "procstory/error.hpp"

namespace procstory {

namespace {

constexpr double kProbFloor = 1e-12;

double nll(double p) { return -std::log(std::max(p, kProbFloor)); }

double bce(double p, double t) {
  return -(t * std::log(std::max(p, kProbFloor)) +
           (1.0 - t) * std::log(std::max(1.0 - p, kProbFloor)));
}

/// Cross-entropy of the per-step attribute classifiers, averaged over
/// steps and attributes; backprops into the MLP when grads != null.
double attribute_term(const TieredHeads& heads, const StepRepresentations& reps,
                      const std::vector<std::vector<int>>& labels, bool precondition,
                      double scale, TieredHeads* grads) {
  const int n = reps.steps();
  const int A = heads.attribute_count();
  double sum = 0.0;
  for (int a = 0; a < A; ++a) {
    const AttributeMlp& mlp =
        precondition ? heads.precondition[static_cast<std::size_t>(a)]
                     : heads.effect[static_cast<std::size_t>(a)];
    AttributeMlp* g = nullptr;
    if (grads) {
      g = precondition ? &grads->precondition[static_cast<std::size_t>(a)]
                       : &grads->effect[static_cast<std::size_t>(a)];
    }
    double attr_loss = 0.0;
    for (int s = 0; s < n; ++s) {
      Eigen::VectorXd r = reps.rows.row(s).transpose();
      Eigen::VectorXd hidden = ((mlp.w1 * r + mlp.b1.col(0)).array().tanh()).matrix();
      Eigen::VectorXd probs = softmax(mlp.w2 * hidden + mlp.b2.col(0));
      const int y = labels[static_cast<std::size_t>(a)][static_cast<std::size_t>(s)];
      if (y < 0 || y >= probs.size()) {
        throw ValidationError("attribute label index outside label space");
      }
      attr_loss += nll(probs(y));
      if (g) {
        Eigen::VectorXd dlogits = probs;
        dlogits(y) -= 1.0;
        // Chain through mean over steps, 1/A, and the regime weight.
        const double k = scale / (A * n);
        g->w2 += k * dlogits * hidden.transpose();
        g->b2.col(0) += k * dlogits;
        Eigen::VectorXd dhidden = mlp.w2.transpose() * dlogits;
        Eigen::VectorXd dpre =
            dhidden.cwiseProduct((1.0 - hidden.array().square()).matrix());
        g->w1 += k * dpre * r.transpose();
        g->b1.col(0) += k * dpre;
      }
    }
    sum += attr_loss / n;
  }
  return sum / A;
}

double conflict_term(const TieredHeads& heads, const StepRepresentations& reps,
                     const Eigen::VectorXd& target, double scale, TieredHeads* grads) {
  const int n = reps.steps();
  const int pairs = conflict_pair_count(n);
  if (target.size() != pairs) {
    throw DimensionError("conflict target size does not match pair count");
  }
  if (pairs == 0) return 0.0;
  const int d = heads.dim();
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const int index = conflict_pair_index(i, j, n);
      double z = heads.conflict_w.col(0).head(d).dot(reps.rows.row(i)) +
                 heads.conflict_w.col(0).tail(d).dot(reps.rows.row(j)) +
                 heads.conflict_b(0, 0);
      double p = sigmoid(z);
      double t = target(index);
      sum += bce(p, t);
      if (grads) {
        const double k = scale * (p - t) / pairs;
        grads->conflict_w.col(0).head(d) += k * reps.rows.row(i).transpose();
        grads->conflict_w.col(0).tail(d) += k * reps.rows.row(j).transpose();
        grads->conflict_b(0, 0) += k;
      }
    }
  }
  return sum / pairs;
}

double story_term(const TieredHeads& heads, const StepRepresentations& reps, int label,
                  double scale, TieredHeads* grads) {
  Eigen::VectorXd pooled = reps.rows.colwise().mean();
  Eigen::VectorXd probs = softmax(heads.story_w * pooled + heads.story_b.col(0));
  if (label < 0 || label > 1) throw ValidationError("story label must be 0 or 1");
  double loss = nll(probs(label));
  if (grads) {
    Eigen::VectorXd dlogits = probs;
    dlogits(label) -= 1.0;
    grads->story_w += scale * dlogits * pooled.transpose();
    grads->story_b.col(0) += scale * dlogits;
  }
  return loss;
}

double pair_term(const TieredHeads& heads, const StepRepresentations& first,
                 const StepRepresentations& second, int plausible_index, double scale,
                 TieredHeads* grads) {
  Eigen::VectorXd pooled_first = first.rows.colwise().mean();
  Eigen::VectorXd pooled_second = second.rows.colwise().mean();
  Eigen::Vector2d scores(heads.pair_w.col(0).dot(pooled_first) + heads.pair_b(0, 0),
                         heads.pair_w.col(0).dot(pooled_second) + heads.pair_b(0, 0));
  Eigen::Vector2d probs = softmax(scores);
  if (plausible_index < 0 || plausible_index > 1) {
    throw ValidationError("pair target must be 0 or 1");
  }
  double loss = nll(probs(plausible_index));
  if (grads) {
    Eigen::Vector2d dscores = probs;
    dscores(plausible_index) -= 1.0;
    grads->pair_w.col(0) +=
        scale * (dscores(0) * pooled_first + dscores(1) * pooled_second);
    grads->pair_b(0, 0) += scale * (dscores(0) + dscores(1));
  }
  return loss;
}

}  // namespace

LossBreakdown compute_loss(const TieredPrediction& prediction, const SequenceLabels& labels,
                           const RegimeConfig& cfg) {
  cfg.validate();
  LossBreakdown out;

  const int A = static_cast<int>(prediction.attributes.precondition.size());
  const int n = labels.steps();
  for (int a = 0; a < A; ++a) {
    const Eigen::MatrixXd& prec = prediction.attributes.precondition[static_cast<std::size_t>(a)];
    const Eigen::MatrixXd& eff = prediction.attributes.effect[static_cast<std::size_t>(a)];
    if (prec.rows() != n || eff.rows() != n) {
      throw DimensionError("attribute distributions do not cover every step");
    }
    double prec_loss = 0.0;
    double eff_loss = 0.0;
    for (int s = 0; s < n; ++s) {
      int yp = labels.precondition[static_cast<std::size_t>(a)][static_cast<std::size_t>(s)];
      int ye = labels.effect[static_cast<std::size_t>(a)][static_cast<std::size_t>(s)];
      if (yp < 0 || yp >= prec.cols() || ye < 0 || ye >= eff.cols()) {
        throw ValidationError("label index outside attribute label space");
      }
      prec_loss += nll(prec(s, yp));
      eff_loss += nll(eff(s, ye));
    }
    out.precondition += prec_loss / n;
    out.effect += eff_loss / n;
  }
  if (A > 0) {
    out.precondition /= A;
    out.effect /= A;
  }

  if (prediction.conflict.size() != labels.conflict_target.size()) {
    throw DimensionError("conflict prediction size does not match target");
  }
  for (Eigen::Index i = 0; i < prediction.conflict.size(); ++i) {
    out.conflict += bce(prediction.conflict(i), labels.conflict_target(i));
  }
  if (prediction.conflict.size() > 0) {
    out.conflict /= static_cast<double>(prediction.conflict.size());
  }

  if (labels.story_label) {
    out.plausibility = nll(prediction.plausibility(*labels.story_label == kPlausible ? 1 : 0));
  }

  out.total = cfg.w_plausibility * out.plausibility + cfg.w_conflict * out.conflict +
              cfg.w_precondition * out.precondition + cfg.w_effect * out.effect;
  return out;
}

LossBreakdown sequence_loss(const TieredHeads& heads, const StepRepresentations& reps,
                            const SequenceLabels& labels, const RegimeConfig& cfg,
                            TieredHeads* grads) {
  cfg.validate();
  LossBreakdown out;
  out.precondition =
      attribute_term(heads, reps, labels.precondition, true, cfg.w_precondition, grads);
  out.effect = attribute_term(heads, reps, labels.effect, false, cfg.w_effect, grads);
  out.conflict =
      conflict_term(heads, reps, labels.conflict_target, cfg.w_conflict, grads);
  if (labels.story_label) {
    out.plausibility = story_term(heads, reps, *labels.story_label == kPlausible ? 1 : 0,
                                  cfg.w_plausibility, grads);
  }
  out.total = cfg.w_plausibility * out.plausibility + cfg.w_conflict * out.conflict +
              cfg.w_precondition * out.precondition + cfg.w_effect * out.effect;
  return out;
}

LossBreakdown pair_loss(const TieredHeads& heads, const StepRepresentations& first,
                        const StepRepresentations& second, const SequenceLabels& labels_first,
                        const SequenceLabels& labels_second, int plausible_index,
                        const RegimeConfig& cfg, TieredHeads* grads) {
  cfg.validate();
  LossBreakdown out;
  // Per-side supervision averaged so a pair step has the same scale as a
  // single-story step.
  out.precondition =
      0.5 * (attribute_term(heads, first, labels_first.precondition, true,
                            0.5 * cfg.w_precondition, grads) +
             attribute_term(heads, second, labels_second.precondition, true,
                            0.5 * cfg.w_precondition, grads));
  out.effect = 0.5 * (attribute_term(heads, first, labels_first.effect, false,
                                     0.5 * cfg.w_effect, grads) +
                      attribute_term(heads, second, labels_second.effect, false,
                                     0.5 * cfg.w_effect, grads));
  out.conflict = 0.5 * (conflict_term(heads, first, labels_first.conflict_target,
                                      0.5 * cfg.w_conflict, grads) +
                        conflict_term(heads, second, labels_second.conflict_target,
                                      0.5 * cfg.w_conflict, grads));
  if (cfg.regime != Regime::sentence_centric) {
    out.plausibility =
        pair_term(heads, first, second, plausible_index, cfg.w_plausibility, grads);
  }
  out.total = cfg.w_plausibility * out.plausibility + cfg.w_conflict * out.conflict +
              cfg.w_precondition * out.precondition + cfg.w_effect * out.effect;
  return out;
}

}  // namespace procstory
