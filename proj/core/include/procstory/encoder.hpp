#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>

#include <Eigen/Core>

#include "procstory/sequence.hpp"

namespace procstory {

/// Contract for the contextual encoder behind the tiered heads: maps token
/// ids plus timestep ids to one d-vector per token. Implementations must
/// be deterministic for fixed weights and inputs. Two embedding tables
/// (contextual and timestep) are summed at the input.
class Encoder {
 public:
  virtual ~Encoder() = default;

  virtual int dim() const = 0;
  virtual int max_tokens() const = 0;
  virtual std::string kind() const = 0;

  /// Returns an m x d matrix, one row per input token.
  virtual Eigen::MatrixXd encode(const TokenizedInput& input) const = 0;

  /// Named weight tensors for checkpointing; empty when the weights live
  /// elsewhere (remote encoders).
  virtual std::map<std::string, Eigen::MatrixXd> state() const { return {}; }
  virtual void load_state(const std::map<std::string, Eigen::MatrixXd>& state);
};

struct TinyEncoderConfig {
  int dim = 32;
  int layers = 2;
  int heads = 2;
  int feed_forward = 64;
  int vocab_size = 4096;
  int max_tokens = 256;
  std::uint64_t seed = 7;
};

/// Small bidirectional transformer with random, seed-determined weights.
/// Used as a frozen feature extractor in tests and toy training; also the
/// reference implementation of the encoder contract.
class TinyTransformerEncoder : public Encoder {
 public:
  explicit TinyTransformerEncoder(const TinyEncoderConfig& config);

  int dim() const override { return config_.dim; }
  int max_tokens() const override { return config_.max_tokens; }
  std::string kind() const override { return "tiny"; }
  const TinyEncoderConfig& config() const { return config_; }

  Eigen::MatrixXd encode(const TokenizedInput& input) const override;

  std::map<std::string, Eigen::MatrixXd> state() const override;
  void load_state(const std::map<std::string, Eigen::MatrixXd>& state) override;

 private:
  struct Layer {
    Eigen::MatrixXd wq, wk, wv, wo;          // d x d
    Eigen::VectorXd ln1_gain, ln1_bias;      // d
    Eigen::MatrixXd ff1, ff2;                // ff x d, d x ff
    Eigen::VectorXd ff1_bias, ff2_bias;      // ff, d
    Eigen::VectorXd ln2_gain, ln2_bias;      // d
  };

  TinyEncoderConfig config_;
  Eigen::MatrixXd token_embedding_;     // V x d
  Eigen::MatrixXd timestep_embedding_;  // 4 x d
  std::vector<Layer> layers_;
  Eigen::VectorXd final_gain_, final_bias_;
};

/// Client for an encoder served over HTTP: POST /encode with token and
/// timestep ids, JSON vectors back. The adapter used to plug a pretrained
/// masked-LM encoder into the same contract.
class RemoteEncoder : public Encoder {
 public:
  RemoteEncoder(std::string endpoint, int dim, int max_tokens);

  int dim() const override { return dim_; }
  int max_tokens() const override { return max_tokens_; }
  std::string kind() const override { return "remote"; }
  const std::string& endpoint() const { return endpoint_; }

  Eigen::MatrixXd encode(const TokenizedInput& input) const override;

 private:
  std::string endpoint_;
  int dim_;
  int max_tokens_;
};

}  // namespace procstory
