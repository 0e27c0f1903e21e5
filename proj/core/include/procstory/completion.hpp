#pragma once

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

namespace procstory {

struct CompletionParams {
  std::vector<std::string> stop;
  int max_tokens = 256;
  // Temperature is pinned to 0; annotation must be reproducible.
};

/// The LM behind attribute annotation. Implementations must return the
/// same completion for the same prompt.
class CompletionService {
 public:
  virtual ~CompletionService() = default;
  virtual std::string complete(const std::string& prompt, const CompletionParams& params) = 0;
};

/// Deterministic prompt -> completion table. `fallback` (when set) answers
/// prompts missing from the table; otherwise they come back empty.
class MockCompletionService : public CompletionService {
 public:
  explicit MockCompletionService(std::map<std::string, std::string> table = {});

  void add(const std::string& prompt, const std::string& completion);
  void set_fallback(std::function<std::string(const std::string&)> fallback);

  std::string complete(const std::string& prompt, const CompletionParams& params) override;

  int calls() const { return calls_; }

 private:
  std::map<std::string, std::string> table_;
  std::function<std::string(const std::string&)> fallback_;
  int calls_ = 0;
};

/// Parses the tail (query) block of a canonical prompt and answers it by
/// rule: every declared participant active at every step, first
/// non-default label for states. Deterministic; drives CLI runs without a
/// live service.
std::string heuristic_completion(const std::string& prompt);

struct HttpCompletionConfig {
  std::string endpoint;
  std::string path = "/v1/completions";
  std::string model;
  std::string credential_env = "PROCSTORY_COMPLETION_TOKEN";
  std::string cache_dir;  // empty disables the cache
  int max_attempts = 3;
  int base_backoff_ms = 250;
};

/// OpenAI-style completions client: exponential backoff up to
/// max_attempts, responses cached on disk keyed by prompt hash so reruns
/// are free and reproducible.
class HttpCompletionService : public CompletionService {
 public:
  explicit HttpCompletionService(HttpCompletionConfig config);

  std::string complete(const std::string& prompt, const CompletionParams& params) override;

 private:
  std::optional<std::string> cache_lookup(const std::string& key, const std::string& prompt);
  void cache_store(const std::string& key, const std::string& prompt,
                   const std::string& completion);

  HttpCompletionConfig config_;
  std::mutex cache_mutex_;
};

}  // namespace procstory
