#include "procstory/logging.hpp"

#include <iostream>

namespace procstory {

Logger& Logger::instance() {
  static Logger logger;
  return logger;
}

void Logger::log(Level level, const std::string& event, nlohmann::json fields) {
  if (!enabled_ && !capture_) return;
  static const char* names[] = {"debug", "info", "warn", "error"};
  nlohmann::json record = std::move(fields);
  record["level"] = names[static_cast<int>(level)];
  record["event"] = event;
  if (capture_) captured_.push_back(record);
  if (enabled_) std::cerr << record.dump() << "\n";
}

}  // namespace procstory
