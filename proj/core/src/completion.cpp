#include "procstory/completion.hpp"

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "procstory/error.hpp"
#include "procstory/hash.hpp"
#include "procstory/logging.hpp"
#include "procstory/text.hpp"

namespace procstory {

using nlohmann::json;
namespace fs = std::filesystem;

MockCompletionService::MockCompletionService(std::map<std::string, std::string> table)
    : table_(std::move(table)) {}

void MockCompletionService::add(const std::string& prompt, const std::string& completion) {
  table_[prompt] = completion;
}

void MockCompletionService::set_fallback(
    std::function<std::string(const std::string&)> fallback) {
  fallback_ = std::move(fallback);
}

std::string MockCompletionService::complete(const std::string& prompt,
                                            const CompletionParams& params) {
  (void)params;
  ++calls_;
  auto it = table_.find(prompt);
  if (it != table_.end()) return it->second;
  if (fallback_) return fallback_(prompt);
  return "";
}

std::string heuristic_completion(const std::string& prompt) {
  // The query block is everything after the last double blank line.
  std::size_t pos = prompt.rfind("\n\n\n");
  std::string block = pos == std::string::npos ? prompt : prompt.substr(pos + 3);

  std::vector<std::string> declarations;
  struct Step {
    int number = 0;
  };
  std::vector<Step> steps;
  bool state_mode = prompt.find(".precondition = ") != std::string::npos;

  std::istringstream in(block);
  std::string line;
  while (std::getline(in, line)) {
    std::string trimmed = trim(line);
    if (trimmed.starts_with("p_") && trimmed.find("= Node(") != std::string::npos) {
      declarations.push_back(trimmed.substr(0, trimmed.find(' ')));
    } else if (trimmed.starts_with("def step_")) {
      std::size_t open = trimmed.find('(');
      int number = std::atoi(trimmed.substr(9, open - 9).c_str());
      steps.push_back({number});
    }
  }

  std::ostringstream out;
  for (const Step& step : steps) {
    out << "def step_" << step.number << "():\n";
    if (state_mode) {
      // Name the first participant with a generic active state; the label
      // mapper downgrades anything outside the schema.
      if (!declarations.empty()) {
        out << "    " << declarations.front() << ".attribute.precondition = \"true\"\n";
        out << "    " << declarations.front() << ".attribute.effect = \"true\"\n";
      }
    } else {
      out << "    active = [";
      for (std::size_t i = 0; i < declarations.size(); ++i) {
        if (i) out << ", ";
        out << declarations[i];
      }
      out << "]\n";
    }
  }
  return out.str();
}

HttpCompletionService::HttpCompletionService(HttpCompletionConfig config)
    : config_(std::move(config)) {
  if (config_.endpoint.empty()) throw ConfigError("completion endpoint is empty");
}

std::optional<std::string> HttpCompletionService::cache_lookup(const std::string& key,
                                                               const std::string& prompt) {
  if (config_.cache_dir.empty()) return std::nullopt;
  std::lock_guard<std::mutex> lock(cache_mutex_);
  fs::path file = fs::path(config_.cache_dir) / (key + ".json");
  std::ifstream in(file);
  if (!in) return std::nullopt;
  try {
    json record;
    in >> record;
    if (record.at("prompt").get<std::string>() != prompt) return std::nullopt;  // hash clash
    return record.at("completion").get<std::string>();
  } catch (const json::exception&) {
    return std::nullopt;
  }
}

void HttpCompletionService::cache_store(const std::string& key, const std::string& prompt,
                                        const std::string& completion) {
  if (config_.cache_dir.empty()) return;
  std::lock_guard<std::mutex> lock(cache_mutex_);
  fs::create_directories(config_.cache_dir);
  fs::path file = fs::path(config_.cache_dir) / (key + ".json");
  std::ofstream out(file, std::ios::binary);
  out << json{{"prompt", prompt}, {"completion", completion}}.dump() << "\n";
}

std::string HttpCompletionService::complete(const std::string& prompt,
                                            const CompletionParams& params) {
  const std::string key = hex64(fnv1a64(prompt));
  if (auto cached = cache_lookup(key, prompt)) return *cached;

  json request = {{"prompt", prompt},
                  {"max_tokens", params.max_tokens},
                  {"temperature", 0}};
  if (!config_.model.empty()) request["model"] = config_.model;
  if (!params.stop.empty()) request["stop"] = params.stop;

  std::string error;
  for (int attempt = 0; attempt < config_.max_attempts; ++attempt) {
    if (attempt > 0) {
      std::this_thread::sleep_for(
          std::chrono::milliseconds(config_.base_backoff_ms * (1 << (attempt - 1))));
    }
    httplib::Client client(config_.endpoint);
    client.set_read_timeout(60, 0);
    if (const char* token = std::getenv(config_.credential_env.c_str())) {
      client.set_default_headers({{"Authorization", std::string("Bearer ") + token}});
    }
    httplib::Result res = client.Post(config_.path, request.dump(), "application/json");
    if (!res) {
      error = "no response from " + config_.endpoint;
      continue;
    }
    if (res->status != 200) {
      error = "status " + std::to_string(res->status);
      // 4xx other than 429 will not improve on retry.
      if (res->status >= 400 && res->status < 500 && res->status != 429) break;
      continue;
    }
    try {
      json body = json::parse(res->body);
      std::string completion =
          body.at("choices").at(0).at("text").get<std::string>();
      cache_store(key, prompt, completion);
      return completion;
    } catch (const json::exception& e) {
      error = std::string("bad completion payload: ") + e.what();
    }
  }
  throw ServiceError("completion service failed after " +
                     std::to_string(config_.max_attempts) + " attempts: " + error);
}

}  // namespace procstory
