#include "procstory/checkpoint.hpp"

#include <filesystem>
#include <fstream>
#include <vector>

#include <json.hpp>

#include "procstory/error.hpp"

namespace procstory {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct TensorRef {
  std::string name;
  const Eigen::MatrixXd* tensor;
};

std::vector<TensorRef> tensor_index(const TieredModel& model) {
  std::vector<TensorRef> refs;
  model.heads().for_each([&](const std::string& name, const Eigen::MatrixXd& m) {
    refs.push_back({"heads." + name, &m});
  });
  return refs;
}

}  // namespace

void save_checkpoint(const std::string& dir, const TieredModel& model) {
  fs::create_directories(dir);

  std::vector<TensorRef> refs = tensor_index(model);
  std::map<std::string, Eigen::MatrixXd> encoder_state = model.encoder().state();
  for (const auto& [name, tensor] : encoder_state) {
    refs.push_back({"encoder." + name, &tensor});
  }

  json tensors = json::array();
  std::ofstream blob(fs::path(dir) / "weights.bin", std::ios::binary);
  if (!blob) throw ConfigError("cannot write checkpoint blob in " + dir);
  for (const TensorRef& ref : refs) {
    tensors.push_back({{"name", ref.name},
                       {"rows", ref.tensor->rows()},
                       {"cols", ref.tensor->cols()}});
    for (Eigen::Index c = 0; c < ref.tensor->cols(); ++c) {
      for (Eigen::Index r = 0; r < ref.tensor->rows(); ++r) {
        double value = (*ref.tensor)(r, c);
        blob.write(reinterpret_cast<const char*>(&value), sizeof(double));
      }
    }
  }
  blob.close();

  json encoder = {{"kind", model.encoder().kind()},
                  {"dim", model.encoder().dim()},
                  {"max_tokens", model.encoder().max_tokens()}};
  if (auto* tiny = dynamic_cast<const TinyTransformerEncoder*>(&model.encoder())) {
    encoder["layers"] = tiny->config().layers;
    encoder["heads"] = tiny->config().heads;
    encoder["feed_forward"] = tiny->config().feed_forward;
    encoder["vocab_size"] = tiny->config().vocab_size;
    encoder["seed"] = tiny->config().seed;
  } else if (auto* remote = dynamic_cast<const RemoteEncoder*>(&model.encoder())) {
    encoder["endpoint"] = remote->endpoint();
  }

  json manifest = {
      {"format", 1},
      {"schema_hash", model.schema().hash()},
      {"schema", json::parse(model.schema().to_json_string())},
      {"d", model.encoder().dim()},
      {"A", model.schema().size()},
      {"hidden", model.options().hidden},
      {"mode", to_string(model.mode())},
      {"tie_rules",
       {{"conflict_pair", "lowest_index"}, {"story_choice", "prefer_first"}}},
      {"sequence",
       {{"question_template", model.options().sequence.question_template},
        {"dummy_surface", model.options().sequence.dummy_surface},
        {"max_tokens", model.options().sequence.max_tokens}}},
      {"encoder", encoder},
      {"tensors", tensors},
  };
  std::ofstream out(fs::path(dir) / "manifest.json", std::ios::binary);
  if (!out) throw ConfigError("cannot write checkpoint manifest in " + dir);
  out << manifest.dump(2) << "\n";
}

namespace {

json read_manifest(const std::string& dir) {
  std::ifstream in(fs::path(dir) / "manifest.json");
  if (!in) throw ConfigError("no checkpoint manifest in " + dir);
  json manifest;
  in >> manifest;
  return manifest;
}

}  // namespace

std::string checkpoint_schema_hash(const std::string& dir) {
  return read_manifest(dir).at("schema_hash").get<std::string>();
}

std::unique_ptr<TieredModel> load_checkpoint(const std::string& dir) {
  json manifest = read_manifest(dir);
  if (manifest.value("format", 0) != 1) {
    throw ConfigError("unsupported checkpoint format in " + dir);
  }

  AttributeSchema schema = AttributeSchema::from_json_string(manifest.at("schema").dump());

  const json& enc = manifest.at("encoder");
  std::shared_ptr<Encoder> encoder;
  std::string kind = enc.at("kind").get<std::string>();
  if (kind == "tiny") {
    TinyEncoderConfig config;
    config.dim = enc.at("dim").get<int>();
    config.layers = enc.at("layers").get<int>();
    config.heads = enc.at("heads").get<int>();
    config.feed_forward = enc.at("feed_forward").get<int>();
    config.vocab_size = enc.at("vocab_size").get<int>();
    config.max_tokens = enc.at("max_tokens").get<int>();
    config.seed = enc.at("seed").get<std::uint64_t>();
    encoder = std::make_shared<TinyTransformerEncoder>(config);
  } else if (kind == "remote") {
    encoder = std::make_shared<RemoteEncoder>(enc.at("endpoint").get<std::string>(),
                                              enc.at("dim").get<int>(),
                                              enc.at("max_tokens").get<int>());
  } else {
    throw ConfigError("unknown encoder kind in checkpoint: " + kind);
  }

  ModelOptions options;
  options.mode = model_mode_from_string(manifest.at("mode").get<std::string>());
  options.hidden = manifest.at("hidden").get<int>();
  const json& seq = manifest.at("sequence");
  options.sequence.question_template = seq.at("question_template").get<std::string>();
  options.sequence.dummy_surface = seq.at("dummy_surface").get<std::string>();
  options.sequence.max_tokens = seq.at("max_tokens").get<int>();

  auto model = std::make_unique<TieredModel>(std::move(schema), encoder, options);

  // Read the blob back into named tensors, then distribute.
  std::ifstream blob(fs::path(dir) / "weights.bin", std::ios::binary);
  if (!blob) throw ConfigError("no checkpoint blob in " + dir);
  std::map<std::string, Eigen::MatrixXd> tensors;
  for (const json& entry : manifest.at("tensors")) {
    Eigen::MatrixXd m(entry.at("rows").get<Eigen::Index>(),
                      entry.at("cols").get<Eigen::Index>());
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      for (Eigen::Index r = 0; r < m.rows(); ++r) {
        double value = 0;
        if (!blob.read(reinterpret_cast<char*>(&value), sizeof(double))) {
          throw ParseError("checkpoint blob truncated at tensor " +
                           entry.at("name").get<std::string>());
        }
        m(r, c) = value;
      }
    }
    tensors[entry.at("name").get<std::string>()] = std::move(m);
  }

  model->heads().for_each([&](const std::string& name, Eigen::MatrixXd& m) {
    auto it = tensors.find("heads." + name);
    if (it == tensors.end()) throw ParseError("checkpoint missing tensor heads." + name);
    if (it->second.rows() != m.rows() || it->second.cols() != m.cols()) {
      throw DimensionError("checkpoint tensor shape mismatch for heads." + name);
    }
    m = it->second;
  });

  std::map<std::string, Eigen::MatrixXd> encoder_state;
  for (auto& [name, tensor] : tensors) {
    if (name.starts_with("encoder.")) {
      encoder_state[name.substr(8)] = std::move(tensor);
    }
  }
  if (!encoder_state.empty()) encoder->load_state(encoder_state);
  return model;
}

}  // namespace procstory
