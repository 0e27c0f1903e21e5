#include "procstory/optimizer.hpp"

#include <cmath>

#include "procstory/error.hpp"

namespace procstory {

void AdamW::step(TieredHeads& params, const TieredHeads& grads) {
  ++steps_;
  const double bias1 = 1.0 - std::pow(config_.beta1, static_cast<double>(steps_));
  const double bias2 = 1.0 - std::pow(config_.beta2, static_cast<double>(steps_));

  std::map<std::string, const Eigen::MatrixXd*> grad_map;
  grads.for_each([&](const std::string& name, const Eigen::MatrixXd& g) {
    grad_map[name] = &g;
  });

  params.for_each([&](const std::string& name, Eigen::MatrixXd& value) {
    auto it = grad_map.find(name);
    if (it == grad_map.end()) throw DimensionError("missing gradient for " + name);
    const Eigen::MatrixXd& g = *it->second;
    if (g.rows() != value.rows() || g.cols() != value.cols()) {
      throw DimensionError("gradient shape mismatch for " + name);
    }
    Eigen::MatrixXd& m = first_moment_.try_emplace(name, Eigen::MatrixXd::Zero(
                                                             value.rows(), value.cols()))
                             .first->second;
    Eigen::MatrixXd& v = second_moment_.try_emplace(name, Eigen::MatrixXd::Zero(
                                                              value.rows(), value.cols()))
                             .first->second;
    m = config_.beta1 * m + (1.0 - config_.beta1) * g;
    v = config_.beta2 * v + (1.0 - config_.beta2) * g.cwiseProduct(g);
    Eigen::MatrixXd m_hat = m / bias1;
    Eigen::MatrixXd v_hat = v / bias2;
    value -= config_.learning_rate *
             (m_hat.array() / (v_hat.array().sqrt() + config_.epsilon)).matrix();
    if (config_.weight_decay != 0.0) {
      value -= config_.learning_rate * config_.weight_decay * value;
    }
  });
}

}  // namespace procstory
