#include "procstory/heads.hpp"

#include <cmath>

#include "procstory/error.hpp"
#include "procstory/rng.hpp"

namespace procstory {

int conflict_pair_count(int n) { return n * (n - 1) / 2; }

int conflict_pair_index(int i, int j, int n) {
  // Pairs (0,1)..(0,n-1),(1,2).. in order: offset of row i is
  // i*n - i(i+1)/2, then j - i - 1 within the row.
  return i * n - i * (i + 1) / 2 + (j - i - 1);
}

std::pair<int, int> conflict_pair_from_index(int index, int n) {
  for (int i = 0; i < n; ++i) {
    int row = n - i - 1;
    if (index < row) return {i, i + 1 + index};
    index -= row;
  }
  throw DimensionError("conflict pair index out of range");
}

void TieredHeads::for_each(
    const std::function<void(const std::string&, Eigen::MatrixXd&)>& fn) {
  for (std::size_t a = 0; a < precondition.size(); ++a) {
    std::string p = "prec" + std::to_string(a) + ".";
    fn(p + "w1", precondition[a].w1);
    fn(p + "b1", precondition[a].b1);
    fn(p + "w2", precondition[a].w2);
    fn(p + "b2", precondition[a].b2);
  }
  for (std::size_t a = 0; a < effect.size(); ++a) {
    std::string p = "eff" + std::to_string(a) + ".";
    fn(p + "w1", effect[a].w1);
    fn(p + "b1", effect[a].b1);
    fn(p + "w2", effect[a].w2);
    fn(p + "b2", effect[a].b2);
  }
  fn("conflict_w", conflict_w);
  fn("conflict_b", conflict_b);
  fn("story_w", story_w);
  fn("story_b", story_b);
  fn("pair_w", pair_w);
  fn("pair_b", pair_b);
}

void TieredHeads::for_each(
    const std::function<void(const std::string&, const Eigen::MatrixXd&)>& fn) const {
  const_cast<TieredHeads*>(this)->for_each(
      [&fn](const std::string& name, Eigen::MatrixXd& m) { fn(name, m); });
}

TieredHeads TieredHeads::zeros_like() const {
  TieredHeads out = *this;
  out.for_each([](const std::string&, Eigen::MatrixXd& m) { m.setZero(); });
  return out;
}

namespace {

TieredHeads make_heads(const AttributeSchema& schema, int dim, int hidden) {
  TieredHeads heads;
  for (const AttributeSpec& spec : schema.attributes()) {
    auto mlp = [&](std::size_t labels) {
      AttributeMlp m;
      m.w1 = Eigen::MatrixXd::Zero(hidden, dim);
      m.b1 = Eigen::MatrixXd::Zero(hidden, 1);
      m.w2 = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(labels), hidden);
      m.b2 = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(labels), 1);
      return m;
    };
    heads.precondition.push_back(mlp(spec.preconditions.size()));
    heads.effect.push_back(mlp(spec.effects.size()));
  }
  heads.conflict_w = Eigen::MatrixXd::Zero(2 * dim, 1);
  heads.conflict_b = Eigen::MatrixXd::Zero(1, 1);
  heads.story_w = Eigen::MatrixXd::Zero(2, dim);
  heads.story_b = Eigen::MatrixXd::Zero(2, 1);
  heads.pair_w = Eigen::MatrixXd::Zero(dim, 1);
  heads.pair_b = Eigen::MatrixXd::Zero(1, 1);
  return heads;
}

}  // namespace

TieredHeads zero_heads(const AttributeSchema& schema, int dim, int hidden) {
  return make_heads(schema, dim, hidden);
}

TieredHeads init_heads(const AttributeSchema& schema, int dim, int hidden,
                       std::uint64_t seed) {
  TieredHeads heads = make_heads(schema, dim, hidden);
  Rng rng = make_rng(seed);
  std::normal_distribution<double> dist(0.0, 0.05);
  heads.for_each([&](const std::string& name, Eigen::MatrixXd& m) {
    if (name.ends_with("b1") || name.ends_with("b2") || name.ends_with("_b")) return;
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      for (Eigen::Index r = 0; r < m.rows(); ++r) m(r, c) = dist(rng);
    }
  });
  return heads;
}

Eigen::VectorXd softmax(const Eigen::VectorXd& logits) {
  Eigen::VectorXd out = (logits.array() - logits.maxCoeff()).exp();
  return out / out.sum();
}

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

namespace {

void check_reps(const TieredHeads& heads, const StepRepresentations& reps) {
  if (reps.steps() < 1) throw DimensionError("step representations are empty");
  if (reps.dim() != heads.dim()) {
    throw DimensionError("representation dim " + std::to_string(reps.dim()) +
                         " does not match head dim " + std::to_string(heads.dim()));
  }
  if (!reps.rows.allFinite()) throw DimensionError("non-finite step representation");
}

}  // namespace

AttributeDistributions classify_attributes(const TieredHeads& heads,
                                           const StepRepresentations& reps) {
  check_reps(heads, reps);
  AttributeDistributions out;
  auto run = [&](const AttributeMlp& mlp) {
    Eigen::MatrixXd hidden =
        ((mlp.w1 * reps.rows.transpose()).colwise() + mlp.b1.col(0)).array().tanh();
    Eigen::MatrixXd logits = (mlp.w2 * hidden).colwise() + mlp.b2.col(0);
    Eigen::MatrixXd probs(reps.steps(), logits.rows());
    for (int step = 0; step < reps.steps(); ++step) {
      probs.row(step) = softmax(logits.col(step)).transpose();
    }
    return probs;
  };
  for (const AttributeMlp& mlp : heads.precondition) out.precondition.push_back(run(mlp));
  for (const AttributeMlp& mlp : heads.effect) out.effect.push_back(run(mlp));
  return out;
}

Eigen::VectorXd detect_conflicts(const TieredHeads& heads, const StepRepresentations& reps) {
  check_reps(heads, reps);
  const int n = reps.steps();
  Eigen::VectorXd out(conflict_pair_count(n));
  const int d = heads.dim();
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      double z = heads.conflict_w.col(0).head(d).dot(reps.rows.row(i)) +
                 heads.conflict_w.col(0).tail(d).dot(reps.rows.row(j)) +
                 heads.conflict_b(0, 0);
      out(conflict_pair_index(i, j, n)) = sigmoid(z);
    }
  }
  return out;
}

Eigen::Vector2d score_story_single(const TieredHeads& heads, const StepRepresentations& reps) {
  check_reps(heads, reps);
  Eigen::VectorXd pooled = reps.rows.colwise().mean();
  Eigen::VectorXd logits = heads.story_w * pooled + heads.story_b.col(0);
  return softmax(logits);
}

Eigen::Vector2d score_story_joint(const TieredHeads& heads, const StepRepresentations& first,
                                  const StepRepresentations& second) {
  check_reps(heads, first);
  check_reps(heads, second);
  if (first.dim() != second.dim()) {
    throw DimensionError("joint scoring requires equal representation dims");
  }
  Eigen::VectorXd pooled_first = first.rows.colwise().mean();
  Eigen::VectorXd pooled_second = second.rows.colwise().mean();
  Eigen::Vector2d scores(heads.pair_w.col(0).dot(pooled_first) + heads.pair_b(0, 0),
                         heads.pair_w.col(0).dot(pooled_second) + heads.pair_b(0, 0));
  return softmax(scores);
}

}  // namespace procstory
