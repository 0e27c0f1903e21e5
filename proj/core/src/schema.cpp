#include "procstory/schema.hpp"

#include <fstream>
#include <set>

#include <json.hpp>

#include "procstory/error.hpp"
#include "procstory/hash.hpp"

namespace procstory {

using nlohmann::json;

AttributeSchema::AttributeSchema(std::vector<AttributeSpec> attributes)
    : attributes_(std::move(attributes)) {
  check();
}

void AttributeSchema::check() const {
  if (attributes_.empty()) {
    throw ValidationError("schema must define at least one attribute");
  }
  std::set<std::string> seen;
  for (const AttributeSpec& spec : attributes_) {
    if (!seen.insert(spec.name).second) {
      throw ValidationError("duplicate attribute name: " + spec.name);
    }
    for (const auto* space : {&spec.preconditions, &spec.effects}) {
      if (space->empty() || (*space)[0] != kIrrelevantLabel) {
        throw ValidationError("label space of '" + spec.name +
                              "' must start with the irrelevant label");
      }
    }
  }
}

int AttributeSchema::index_of(const std::string& name) const {
  for (std::size_t i = 0; i < attributes_.size(); ++i) {
    if (attributes_[i].name == name) return static_cast<int>(i);
  }
  return -1;
}

namespace {
int label_index(const std::vector<std::string>& space, const std::string& label) {
  for (std::size_t i = 0; i < space.size(); ++i) {
    if (space[i] == label) return static_cast<int>(i);
  }
  return -1;
}
}  // namespace

int AttributeSchema::precondition_label_index(int attribute, const std::string& label) const {
  return label_index(attributes_[static_cast<std::size_t>(attribute)].preconditions, label);
}

int AttributeSchema::effect_label_index(int attribute, const std::string& label) const {
  return label_index(attributes_[static_cast<std::size_t>(attribute)].effects, label);
}

std::string AttributeSchema::to_json_string() const {
  json attrs = json::array();
  for (const AttributeSpec& spec : attributes_) {
    attrs.push_back({{"name", spec.name},
                     {"preconditions", spec.preconditions},
                     {"effects", spec.effects}});
  }
  return json{{"attributes", attrs}}.dump(2) + "\n";
}

AttributeSchema AttributeSchema::from_json_string(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("schema: ") + e.what());
  }
  std::vector<AttributeSpec> specs;
  for (const json& item : doc.at("attributes")) {
    AttributeSpec spec;
    spec.name = item.at("name").get<std::string>();
    spec.preconditions = item.at("preconditions").get<std::vector<std::string>>();
    spec.effects = item.at("effects").get<std::vector<std::string>>();
    specs.push_back(std::move(spec));
  }
  return AttributeSchema(std::move(specs));
}

AttributeSchema AttributeSchema::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open schema file: " + path);
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return from_json_string(text);
}

void AttributeSchema::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write schema file: " + path);
  out << to_json_string();
}

std::string AttributeSchema::hash() const { return hex64(fnv1a64(to_json_string())); }

}  // namespace procstory
