#pragma once

#include <memory>
#include <string>

#include "procstory/model.hpp"

namespace procstory {

/// Checkpoints are a directory: manifest.json (schema, dimensions, mode,
/// tie rules, encoder config, tensor index) plus weights.bin (raw doubles
/// in manifest order). Self-contained: load_checkpoint rebuilds the model
/// without external schema files.
void save_checkpoint(const std::string& dir, const TieredModel& model);

std::unique_ptr<TieredModel> load_checkpoint(const std::string& dir);

/// Schema fingerprint recorded in the manifest, for compatibility checks.
std::string checkpoint_schema_hash(const std::string& dir);

}  // namespace procstory
