#pragma once

#include <string>
#include <vector>

namespace procstory {

/// Index 0 of every label space is the irrelevant/default label.
constexpr const char* kIrrelevantLabel = "irrelevant";

struct AttributeSpec {
  std::string name;
  std::vector<std::string> preconditions;
  std::vector<std::string> effects;
};

/// The set of tracked physical attributes and their label spaces.
class AttributeSchema {
 public:
  AttributeSchema() = default;
  explicit AttributeSchema(std::vector<AttributeSpec> attributes);

  static AttributeSchema load(const std::string& path);
  void save(const std::string& path) const;

  const std::vector<AttributeSpec>& attributes() const { return attributes_; }
  int size() const { return static_cast<int>(attributes_.size()); }

  /// -1 when the attribute is unknown.
  int index_of(const std::string& name) const;
  const AttributeSpec& at(int index) const { return attributes_[static_cast<std::size_t>(index)]; }

  int precondition_label_index(int attribute, const std::string& label) const;
  int effect_label_index(int attribute, const std::string& label) const;

  /// Stable fingerprint of the canonical JSON form; checkpoints embed it
  /// so an incompatible schema is caught at load time.
  std::string hash() const;

  std::string to_json_string() const;
  static AttributeSchema from_json_string(const std::string& text);

 private:
  void check() const;
  std::vector<AttributeSpec> attributes_;
};

}  // namespace procstory
