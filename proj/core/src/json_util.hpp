#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace solbench::detail {

using json = nlohmann::json;

/// Field access that treats a missing key and `null` alike and throws `E`
/// with a dotted path on a type mismatch.
template <typename E>
class JsonReader {
 public:
  JsonReader(const json& node, std::string path) : node_(node), path_(std::move(path)) {}

  const json* find(std::string_view key) const {
    auto it = node_.find(std::string(key));
    if (it == node_.end() || it->is_null()) return nullptr;
    return &*it;
  }

  std::string string(std::string_view key, std::string fallback = {}) const {
    const json* v = find(key);
    if (!v) return fallback;
    if (v->is_string()) return v->get<std::string>();
    if (v->is_number() || v->is_boolean()) return v->dump();
    throw E(path_ + "." + std::string(key) + ": expected a string");
  }

  std::optional<std::string> optional_string(std::string_view key) const {
    if (!find(key)) return std::nullopt;
    return string(key);
  }

  std::vector<std::string> string_list(std::string_view key) const {
    std::vector<std::string> out;
    const json* v = find(key);
    if (!v) return out;
    if (!v->is_array()) throw E(path_ + "." + std::string(key) + ": expected an array");
    for (std::size_t i = 0; i < v->size(); ++i) {
      const json& item = (*v)[i];
      if (item.is_string()) out.push_back(item.get<std::string>());
      else if (item.is_number()) out.push_back(item.dump());
      else if (!item.is_null())
        throw E(path_ + "." + std::string(key) + "[" + std::to_string(i) + "]: expected a string");
    }
    return out;
  }

  /// Calls `fn(JsonReader)` for every object in the array at `key`.
  template <typename Fn>
  void objects(std::string_view key, Fn&& fn) const {
    const json* v = find(key);
    if (!v) return;
    if (!v->is_array()) throw E(path_ + "." + std::string(key) + ": expected an array");
    for (std::size_t i = 0; i < v->size(); ++i) {
      const json& item = (*v)[i];
      const std::string p = path_ + "." + std::string(key) + "[" + std::to_string(i) + "]";
      if (!item.is_object()) throw E(p + ": expected an object");
      fn(JsonReader(item, p));
    }
  }

  const json& node() const { return node_; }
  const std::string& path() const { return path_; }

 private:
  const json& node_;
  std::string path_;
};

/// Parses text into JSON, returning nullopt instead of throwing.
inline std::optional<json> try_parse(std::string_view text) {
  json j = json::parse(text.begin(), text.end(), nullptr, false);
  if (j.is_discarded()) return std::nullopt;
  return j;
}

/// First balanced `{...}` span in `text` that parses as a JSON object,
/// tolerating prose and code fences around it.
inline std::optional<json> find_json_object(std::string_view text) {
  for (std::size_t start = text.find('{'); start != std::string_view::npos;
       start = text.find('{', start + 1)) {
    int depth = 0;
    bool in_string = false;
    bool escaped = false;
    for (std::size_t i = start; i < text.size(); ++i) {
      const char c = text[i];
      if (in_string) {
        if (escaped) escaped = false;
        else if (c == '\\') escaped = true;
        else if (c == '"') in_string = false;
        continue;
      }
      if (c == '"') in_string = true;
      else if (c == '{') ++depth;
      else if (c == '}' && --depth == 0) {
        auto j = try_parse(text.substr(start, i - start + 1));
        if (j && j->is_object()) return j;
        break;
      }
    }
  }
  return std::nullopt;
}

}  // namespace solbench::detail
