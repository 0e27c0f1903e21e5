#pragma once

#include <map>
#include <string>

#include "procstory/heads.hpp"

namespace procstory {

struct AdamWConfig {
  double learning_rate = 1e-6;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  double weight_decay = 0.01;
};

/// Adaptive gradient descent with decoupled weight decay and no warm-up.
/// Moment state is keyed by parameter name so it survives the parameter
/// structure being copied around checkpoints.
class AdamW {
 public:
  explicit AdamW(AdamWConfig config) : config_(config) {}

  const AdamWConfig& config() const { return config_; }

  void step(TieredHeads& params, const TieredHeads& grads);

 private:
  AdamWConfig config_;
  long steps_ = 0;
  std::map<std::string, Eigen::MatrixXd> first_moment_;
  std::map<std::string, Eigen::MatrixXd> second_moment_;
};

}  // namespace procstory
