#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace procstory {

/// One JSONL event per line on stderr. Quiet by default in library code;
/// the CLI turns it on. Warnings raised deep in pipelines (failed lookups,
/// dropped records) go through here so they are observable but not fatal.
class Logger {
 public:
  enum class Level { debug, info, warn, error };

  static Logger& instance();

  void set_enabled(bool enabled) { enabled_ = enabled; }
  void set_capture(bool capture) {
    capture_ = capture;
    if (capture) captured_.clear();
  }

  void log(Level level, const std::string& event, nlohmann::json fields = {});
  void warn(const std::string& event, nlohmann::json fields = {}) {
    log(Level::warn, event, std::move(fields));
  }
  void info(const std::string& event, nlohmann::json fields = {}) {
    log(Level::info, event, std::move(fields));
  }

  /// Captured events, newest last. Only populated under set_capture(true);
  /// tests use this to assert on warning paths.
  const std::vector<nlohmann::json>& captured() const { return captured_; }

 private:
  bool enabled_ = false;
  bool capture_ = false;
  std::vector<nlohmann::json> captured_;
};

}  // namespace procstory
