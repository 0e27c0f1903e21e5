#include "procstory/encoder.hpp"

#include <cmath>

#include <httplib.h>
#include <json.hpp>

#include "procstory/error.hpp"
#include "procstory/rng.hpp"

namespace procstory {

void Encoder::load_state(const std::map<std::string, Eigen::MatrixXd>& state) {
  if (!state.empty()) {
    throw DimensionError("encoder '" + kind() + "' does not accept weight state");
  }
}

namespace {

void fill_normal(Eigen::MatrixXd& m, Rng& rng, double stddev) {
  std::normal_distribution<double> dist(0.0, stddev);
  for (Eigen::Index c = 0; c < m.cols(); ++c) {
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      m(r, c) = dist(rng);
    }
  }
}

Eigen::MatrixXd layer_norm(const Eigen::MatrixXd& x, const Eigen::VectorXd& gain,
                           const Eigen::VectorXd& bias) {
  Eigen::MatrixXd out(x.rows(), x.cols());
  for (Eigen::Index r = 0; r < x.rows(); ++r) {
    double mean = x.row(r).mean();
    double var = (x.row(r).array() - mean).square().mean();
    double inv = 1.0 / std::sqrt(var + 1e-5);
    out.row(r) =
        ((x.row(r).array() - mean) * inv).matrix().cwiseProduct(gain.transpose()) +
        bias.transpose();
  }
  return out;
}

Eigen::MatrixXd softmax_rows(Eigen::MatrixXd scores) {
  for (Eigen::Index r = 0; r < scores.rows(); ++r) {
    double max = scores.row(r).maxCoeff();
    scores.row(r) = (scores.row(r).array() - max).exp();
    scores.row(r) /= scores.row(r).sum();
  }
  return scores;
}

}  // namespace

TinyTransformerEncoder::TinyTransformerEncoder(const TinyEncoderConfig& config)
    : config_(config) {
  if (config_.dim <= 0 || config_.dim % config_.heads != 0) {
    throw ConfigError("encoder dim must be a positive multiple of the head count");
  }
  Rng rng = make_rng(config_.seed);
  auto matrix = [&](Eigen::Index rows, Eigen::Index cols, double stddev) {
    Eigen::MatrixXd m(rows, cols);
    fill_normal(m, rng, stddev);
    return m;
  };

  const int d = config_.dim;
  token_embedding_ = matrix(config_.vocab_size, d, 0.1);
  timestep_embedding_ = matrix(4, d, 0.1);
  for (int l = 0; l < config_.layers; ++l) {
    Layer layer;
    layer.wq = matrix(d, d, 0.08);
    layer.wk = matrix(d, d, 0.08);
    layer.wv = matrix(d, d, 0.08);
    layer.wo = matrix(d, d, 0.08);
    layer.ln1_gain = Eigen::VectorXd::Ones(d);
    layer.ln1_bias = Eigen::VectorXd::Zero(d);
    layer.ff1 = matrix(config_.feed_forward, d, 0.08);
    layer.ff1_bias = Eigen::VectorXd::Zero(config_.feed_forward);
    layer.ff2 = matrix(d, config_.feed_forward, 0.08);
    layer.ff2_bias = Eigen::VectorXd::Zero(d);
    layer.ln2_gain = Eigen::VectorXd::Ones(d);
    layer.ln2_bias = Eigen::VectorXd::Zero(d);
    layers_.push_back(std::move(layer));
  }
  final_gain_ = Eigen::VectorXd::Ones(d);
  final_bias_ = Eigen::VectorXd::Zero(d);
}

Eigen::MatrixXd TinyTransformerEncoder::encode(const TokenizedInput& input) const {
  const int m = input.length();
  const int d = config_.dim;
  if (m == 0) throw DimensionError("cannot encode an empty sequence");
  if (m > config_.max_tokens) {
    throw DimensionError("sequence of " + std::to_string(m) +
                         " tokens exceeds encoder maximum " +
                         std::to_string(config_.max_tokens));
  }

  Eigen::MatrixXd x(m, d);
  for (int i = 0; i < m; ++i) {
    int id = input.token_ids[static_cast<std::size_t>(i)];
    int ts = input.timestep_ids[static_cast<std::size_t>(i)];
    if (id < 0 || id >= config_.vocab_size) {
      throw DimensionError("token id " + std::to_string(id) + " outside vocabulary");
    }
    x.row(i) = token_embedding_.row(id) + timestep_embedding_.row(ts);
    // Fixed sinusoidal position signal keeps the encoder parameter-free in
    // sequence length.
    for (int k = 0; k < d; k += 2) {
      double angle = i / std::pow(10000.0, static_cast<double>(k) / d);
      x(i, k) += 0.1 * std::sin(angle);
      if (k + 1 < d) x(i, k + 1) += 0.1 * std::cos(angle);
    }
  }

  const int h = config_.heads;
  const int dh = d / h;
  const double scale = 1.0 / std::sqrt(static_cast<double>(dh));
  for (const Layer& layer : layers_) {
    Eigen::MatrixXd normed = layer_norm(x, layer.ln1_gain, layer.ln1_bias);
    Eigen::MatrixXd q = normed * layer.wq;
    Eigen::MatrixXd k = normed * layer.wk;
    Eigen::MatrixXd v = normed * layer.wv;
    Eigen::MatrixXd attn(m, d);
    for (int head = 0; head < h; ++head) {
      auto qh = q.middleCols(head * dh, dh);
      auto kh = k.middleCols(head * dh, dh);
      auto vh = v.middleCols(head * dh, dh);
      Eigen::MatrixXd weights = softmax_rows(qh * kh.transpose() * scale);
      attn.middleCols(head * dh, dh) = weights * vh;
    }
    x += attn * layer.wo;

    normed = layer_norm(x, layer.ln2_gain, layer.ln2_bias);
    Eigen::MatrixXd hidden = (normed * layer.ff1.transpose()).rowwise() +
                             layer.ff1_bias.transpose();
    hidden = hidden.array().tanh();
    x += (hidden * layer.ff2.transpose()).rowwise() + layer.ff2_bias.transpose();
  }
  return layer_norm(x, final_gain_, final_bias_);
}

std::map<std::string, Eigen::MatrixXd> TinyTransformerEncoder::state() const {
  std::map<std::string, Eigen::MatrixXd> out;
  out["token_embedding"] = token_embedding_;
  out["timestep_embedding"] = timestep_embedding_;
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    const Layer& layer = layers_[l];
    std::string p = "layer" + std::to_string(l) + ".";
    out[p + "wq"] = layer.wq;
    out[p + "wk"] = layer.wk;
    out[p + "wv"] = layer.wv;
    out[p + "wo"] = layer.wo;
    out[p + "ln1_gain"] = layer.ln1_gain;
    out[p + "ln1_bias"] = layer.ln1_bias;
    out[p + "ff1"] = layer.ff1;
    out[p + "ff1_bias"] = layer.ff1_bias;
    out[p + "ff2"] = layer.ff2;
    out[p + "ff2_bias"] = layer.ff2_bias;
    out[p + "ln2_gain"] = layer.ln2_gain;
    out[p + "ln2_bias"] = layer.ln2_bias;
  }
  out["final_gain"] = final_gain_;
  out["final_bias"] = final_bias_;
  return out;
}

void TinyTransformerEncoder::load_state(const std::map<std::string, Eigen::MatrixXd>& state) {
  auto take_matrix = [&](const std::string& name, Eigen::MatrixXd& target) {
    auto it = state.find(name);
    if (it == state.end()) throw DimensionError("checkpoint missing tensor: " + name);
    if (it->second.rows() != target.rows() || it->second.cols() != target.cols()) {
      throw DimensionError("tensor shape mismatch for " + name);
    }
    target = it->second;
  };
  auto take_vector = [&](const std::string& name, Eigen::VectorXd& target) {
    auto it = state.find(name);
    if (it == state.end()) throw DimensionError("checkpoint missing tensor: " + name);
    if (it->second.size() != target.size()) {
      throw DimensionError("tensor shape mismatch for " + name);
    }
    target = Eigen::Map<const Eigen::VectorXd>(it->second.data(), it->second.size());
  };

  take_matrix("token_embedding", token_embedding_);
  take_matrix("timestep_embedding", timestep_embedding_);
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    Layer& layer = layers_[l];
    std::string p = "layer" + std::to_string(l) + ".";
    take_matrix(p + "wq", layer.wq);
    take_matrix(p + "wk", layer.wk);
    take_matrix(p + "wv", layer.wv);
    take_matrix(p + "wo", layer.wo);
    take_vector(p + "ln1_gain", layer.ln1_gain);
    take_vector(p + "ln1_bias", layer.ln1_bias);
    take_matrix(p + "ff1", layer.ff1);
    take_vector(p + "ff1_bias", layer.ff1_bias);
    take_matrix(p + "ff2", layer.ff2);
    take_vector(p + "ff2_bias", layer.ff2_bias);
    take_vector(p + "ln2_gain", layer.ln2_gain);
    take_vector(p + "ln2_bias", layer.ln2_bias);
  }
  take_vector("final_gain", final_gain_);
  take_vector("final_bias", final_bias_);
}

RemoteEncoder::RemoteEncoder(std::string endpoint, int dim, int max_tokens)
    : endpoint_(std::move(endpoint)), dim_(dim), max_tokens_(max_tokens) {}

Eigen::MatrixXd RemoteEncoder::encode(const TokenizedInput& input) const {
  httplib::Client client(endpoint_);
  client.set_read_timeout(30, 0);

  nlohmann::json request = {{"tokens", input.token_ids},
                            {"timesteps", input.timestep_ids}};
  httplib::Result res = client.Post("/encode", request.dump(), "application/json");
  if (!res || res->status != 200) {
    throw ServiceError("encoder endpoint " + endpoint_ + " failed" +
                       (res ? " with status " + std::to_string(res->status) : ""));
  }
  nlohmann::json body = nlohmann::json::parse(res->body);
  const auto& vectors = body.at("vectors");
  if (static_cast<int>(vectors.size()) != input.length()) {
    throw ServiceError("encoder returned " + std::to_string(vectors.size()) +
                       " vectors for " + std::to_string(input.length()) + " tokens");
  }
  Eigen::MatrixXd out(input.length(), dim_);
  for (int i = 0; i < input.length(); ++i) {
    const auto& row = vectors[static_cast<std::size_t>(i)];
    if (static_cast<int>(row.size()) != dim_) {
      throw ServiceError("encoder vector width != configured dim");
    }
    for (int j = 0; j < dim_; ++j) out(i, j) = row[static_cast<std::size_t>(j)].get<double>();
  }
  return out;
}

}  // namespace procstory
