#pragma once

#include <chrono>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "solbench/error.hpp"

namespace solbench {

struct CompletionRequest {
  std::string phase;
  std::string entry_id;
  std::string system_prompt;
  std::string user_prompt;
  std::string model;
  double temperature = 0;
};

struct CompletionResponse {
  std::string text;
  int prompt_tokens = 0;
  int completion_tokens = 0;
  std::chrono::milliseconds latency{0};
};

/// A failed exchange with the backend. Retryable failures (connection
/// errors, 429, 5xx) are retried by call_agent; others fail immediately.
class TransportError : public Error {
 public:
  TransportError(const std::string& what, int status, bool retryable)
      : Error(what), status_(status), retryable_(retryable) {}
  int status() const { return status_; }
  bool retryable() const { return retryable_; }

 private:
  int status_;
  bool retryable_;
};

class ChatBackend {
 public:
  virtual ~ChatBackend() = default;
  /// Throws TransportError on failure.
  virtual CompletionResponse complete(const CompletionRequest& request) = 0;
  virtual std::string name() const = 0;
  /// Responses depend only on the request (logical clock is safe to use).
  virtual bool deterministic() const { return false; }
  /// Reachability check; returns a problem description or nullopt.
  virtual std::optional<std::string> probe() { return std::nullopt; }
};

struct HttpBackendOptions {
  std::string base_url = "https://api.openai.com/v1";
  /// Name of the environment variable holding the bearer token.
  std::string api_key_env = "OPENAI_API_KEY";
  std::chrono::seconds timeout{120};
};

/// Chat-completions client: POST {base_url}/chat/completions with
/// {model, messages, temperature}, reading choices[0].message.content.
class HttpChatBackend : public ChatBackend {
 public:
  explicit HttpChatBackend(HttpBackendOptions options);

  CompletionResponse complete(const CompletionRequest& request) override;
  std::string name() const override { return "http"; }
  std::optional<std::string> probe() override;

  const HttpBackendOptions& options() const { return options_; }

 private:
  HttpBackendOptions options_;
};

/// Builds the chat-completions request body (exposed for tests).
std::string chat_request_body(const CompletionRequest& request);
/// Extracts choices[0].message.content and usage; throws TransportError
/// (non-retryable) when the body has another shape.
CompletionResponse parse_chat_response(std::string_view body);

struct ScriptedReply {
  std::string text;
  /// Non-200 simulates an HTTP error with this status.
  int status = 200;
};

/// Canned responses keyed by (entry id, phase); `*` matches any entry and a
/// phase `audit.2` falls back to `audit`. Replies for a key are consumed in
/// order per requesting entry, the last one repeating.
///
/// Script JSON: {"<entry id>|*": {"<phase>": ["text", {"status": 429}, ...]}}
///
/// An object holding only `text`/`status` is a reply; any other JSON value
/// is served as its serialized text.
class ScriptedBackend : public ChatBackend {
 public:
  ScriptedBackend() = default;
  static std::shared_ptr<ScriptedBackend> from_json(std::string_view text);
  static std::shared_ptr<ScriptedBackend> from_file(const std::string& path);

  void add(std::string entry_id, std::string phase, ScriptedReply reply);

  CompletionResponse complete(const CompletionRequest& request) override;
  std::string name() const override { return "scripted"; }
  bool deterministic() const override { return true; }

  /// Replies served to `entry_id` from the `phase` list (fallbacks included).
  int calls(const std::string& entry_id, const std::string& phase) const;

 private:
  using Key = std::pair<std::string, std::string>;
  mutable std::mutex mutex_;
  std::map<Key, std::vector<ScriptedReply>> replies_;
  std::map<Key, int> served_;
};

}  // namespace solbench
