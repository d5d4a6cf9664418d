#include "solbench/backend.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "httplib.h"
#include "json_util.hpp"

namespace solbench {

using detail::json;

namespace {

struct SplitUrl {
  std::string origin;  // scheme://host[:port]
  std::string path;    // without trailing slash
};

SplitUrl split_url(const std::string& url) {
  const auto scheme_end = url.find("://");
  const auto host_start = scheme_end == std::string::npos ? 0 : scheme_end + 3;
  const auto slash = url.find('/', host_start);
  SplitUrl out;
  out.origin = slash == std::string::npos ? url : url.substr(0, slash);
  out.path = slash == std::string::npos ? "" : url.substr(slash);
  while (!out.path.empty() && out.path.back() == '/') out.path.pop_back();
  return out;
}

bool retryable_status(int status) { return status == 408 || status == 409 || status == 429 || status >= 500; }

std::string api_key(const HttpBackendOptions& options) {
  const char* v = std::getenv(options.api_key_env.c_str());
  return v ? std::string(v) : std::string{};
}

httplib::Client make_client(const SplitUrl& url, std::chrono::seconds timeout) {
  httplib::Client client(url.origin);
  client.set_connection_timeout(std::chrono::seconds(std::min<long>(timeout.count(), 30)));
  client.set_read_timeout(timeout);
  client.set_write_timeout(timeout);
  return client;
}

}  // namespace

std::string chat_request_body(const CompletionRequest& request) {
  json messages = json::array();
  if (!request.system_prompt.empty()) messages.push_back({{"role", "system"}, {"content", request.system_prompt}});
  messages.push_back({{"role", "user"}, {"content", request.user_prompt}});
  json body = {{"model", request.model}, {"messages", messages}, {"temperature", request.temperature}};
  return body.dump();
}

CompletionResponse parse_chat_response(std::string_view body) {
  const auto parsed = detail::try_parse(body);
  if (!parsed || !parsed->is_object()) throw TransportError("chat response is not a JSON object", 200, false);
  const auto& j = *parsed;
  const auto choices = j.find("choices");
  if (choices == j.end() || !choices->is_array() || choices->empty())
    throw TransportError("chat response has no choices", 200, false);
  const auto& first = (*choices)[0];
  const auto message = first.find("message");
  if (message == first.end() || !message->is_object()) throw TransportError("chat response has no message", 200, false);
  const auto content = message->find("content");
  if (content == message->end() || !content->is_string())
    throw TransportError("chat response message has no text content", 200, false);
  CompletionResponse out;
  out.text = content->get<std::string>();
  if (auto usage = j.find("usage"); usage != j.end() && usage->is_object()) {
    out.prompt_tokens = usage->value("prompt_tokens", 0);
    out.completion_tokens = usage->value("completion_tokens", 0);
  }
  return out;
}

HttpChatBackend::HttpChatBackend(HttpBackendOptions options) : options_(std::move(options)) {}

CompletionResponse HttpChatBackend::complete(const CompletionRequest& request) {
  const auto key = api_key(options_);
  if (key.empty()) throw TransportError(options_.api_key_env + " is not set", 401, false);
  const auto url = split_url(options_.base_url);
  auto client = make_client(url, options_.timeout);
  client.set_bearer_token_auth(key);
  const auto started = std::chrono::steady_clock::now();
  auto res = client.Post(url.path + "/chat/completions", chat_request_body(request), "application/json");
  if (!res) {
    throw TransportError("request to " + options_.base_url + " failed: " + httplib::to_string(res.error()), 0, true);
  }
  if (res->status != 200) {
    std::string snippet = res->body.substr(0, 300);
    throw TransportError("HTTP " + std::to_string(res->status) + ": " + snippet, res->status,
                         retryable_status(res->status));
  }
  auto out = parse_chat_response(res->body);
  out.latency = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - started);
  return out;
}

std::optional<std::string> HttpChatBackend::probe() {
  const auto key = api_key(options_);
  if (key.empty()) return options_.api_key_env + " is not set";
  const auto url = split_url(options_.base_url);
  auto client = make_client(url, std::chrono::seconds(15));
  client.set_bearer_token_auth(key);
  auto res = client.Get(url.path + "/models");
  if (!res) return "cannot reach " + options_.base_url + ": " + httplib::to_string(res.error());
  if (res->status != 200) return options_.base_url + " answered HTTP " + std::to_string(res->status);
  return std::nullopt;
}

std::shared_ptr<ScriptedBackend> ScriptedBackend::from_json(std::string_view text) {
  const auto parsed = detail::try_parse(text);
  if (!parsed || !parsed->is_object()) throw Error("script must be a JSON object");
  auto backend = std::make_shared<ScriptedBackend>();
  for (const auto& [entry, phases] : parsed->items()) {
    if (!phases.is_object()) throw Error("script entry '" + entry + "' must map phases to replies");
    for (const auto& [phase, replies] : phases.items()) {
      const std::string where = "script " + entry + "/" + phase;
      auto add_one = [&](const json& item) {
        if (item.is_string()) {
          backend->add(entry, phase, {item.get<std::string>(), 200});
        } else if (item.is_object() && !item.empty() &&
                   std::all_of(item.items().begin(), item.items().end(),
                               [](const auto& kv) { return kv.key() == "text" || kv.key() == "status"; })) {
          ScriptedReply reply;
          reply.text = item.value("text", "");
          reply.status = item.value("status", 200);
          backend->add(entry, phase, std::move(reply));
        } else if (item.is_object() || item.is_array() || item.is_number() || item.is_boolean()) {
          // A JSON value other than a string is served as its serialized text.
          backend->add(entry, phase, {item.dump(), 200});
        } else {
          throw Error(where + ": unsupported reply");
        }
      };
      if (replies.is_array()) {
        if (replies.empty()) throw Error(where + ": no replies");
        for (const auto& item : replies) add_one(item);
      } else {
        add_one(replies);
      }
    }
  }
  return backend;
}

std::shared_ptr<ScriptedBackend> ScriptedBackend::from_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoFailure("cannot read script " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return from_json(ss.str());
}

void ScriptedBackend::add(std::string entry_id, std::string phase, ScriptedReply reply) {
  std::lock_guard lock(mutex_);
  replies_[{std::move(entry_id), std::move(phase)}].push_back(std::move(reply));
}

CompletionResponse ScriptedBackend::complete(const CompletionRequest& request) {
  std::lock_guard lock(mutex_);
  // `refine.2` falls back to `refine`, then the entry falls back to `*`.
  std::vector<Key> candidates;
  const auto base = request.phase.substr(0, request.phase.find('.'));
  for (const std::string& entry : {request.entry_id, std::string("*")}) {
    candidates.push_back({entry, request.phase});
    if (base != request.phase) candidates.push_back({entry, base});
  }
  for (const auto& key : candidates) {
    auto it = replies_.find(key);
    if (it == replies_.end()) continue;
    // Position is per (requesting entry, matched phase): `*` lists replay for
    // each entry, and `audit.1` continues where `audit` stopped.
    int& served = served_[{request.entry_id, key.second}];
    const auto& list = it->second;
    const auto& reply = list[std::min<std::size_t>(static_cast<std::size_t>(served), list.size() - 1)];
    ++served;
    if (reply.status != 200) {
      throw TransportError("scripted HTTP " + std::to_string(reply.status), reply.status,
                           retryable_status(reply.status) || reply.status == 0);
    }
    CompletionResponse out;
    out.text = reply.text;
    return out;
  }
  throw TransportError("no scripted reply for " + request.entry_id + "/" + request.phase, 404, false);
}

int ScriptedBackend::calls(const std::string& entry_id, const std::string& phase) const {
  std::lock_guard lock(mutex_);
  auto it = served_.find({entry_id, phase});
  return it == served_.end() ? 0 : it->second;
}

}  // namespace solbench
