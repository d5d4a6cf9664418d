#include "solbench/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "solbench/error.hpp"
#include "solbench/text.hpp"

namespace solbench {

namespace {

std::string strip_comment(std::string_view line) {
  // `#` inside a quoted value is kept.
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') quoted = !quoted;
    else if (line[i] == '#' && !quoted) return std::string(line.substr(0, i));
  }
  return std::string(line);
}

std::string unquote(std::string v) {
  if (v.size() >= 2 && v.front() == '"' && v.back() == '"') return v.substr(1, v.size() - 2);
  return v;
}

double to_double(std::string_view key, std::string_view value) {
  const auto t = text::trim(value);
  double out = 0;
  const auto* end = t.data() + t.size();
  const auto [ptr, ec] = std::from_chars(t.data(), end, out);
  if (ec != std::errc() || ptr != end || !std::isfinite(out))
    throw ConfigError(std::string(key) + " expects a number, got '" + t + "'");
  return out;
}

long to_int(std::string_view key, std::string_view value, long min_value) {
  const auto t = text::trim(value);
  long out = 0;
  const auto* end = t.data() + t.size();
  const auto [ptr, ec] = std::from_chars(t.data(), end, out);
  if (ec != std::errc() || ptr != end) throw ConfigError(std::string(key) + " expects an integer, got '" + t + "'");
  if (out < min_value)
    throw ConfigError(std::string(key) + " must be at least " + std::to_string(min_value));
  return out;
}

bool to_bool(std::string_view key, std::string_view value) {
  const auto t = text::to_lower(text::trim(value));
  if (t == "true" || t == "yes" || t == "on" || t == "1") return true;
  if (t == "false" || t == "no" || t == "off" || t == "0") return false;
  throw ConfigError(std::string(key) + " expects true or false, got '" + std::string(value) + "'");
}

}  // namespace

std::map<std::string, std::string> parse_key_values(std::string_view text) {
  std::map<std::string, std::string> out;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    ++line_no;
    const auto line = text::trim(strip_comment(text.substr(pos, nl - pos)));
    pos = nl + 1;
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
    auto key = text::trim(line.substr(0, eq));
    if (key.empty()) throw ConfigError("line " + std::to_string(line_no) + ": empty key");
    out[key] = unquote(text::trim(line.substr(eq + 1)));
  }
  return out;
}

void apply_setting(PipelineConfig& c, std::string_view key, std::string_view value) {
  const std::string v = text::trim(value);
  if (key.starts_with("metrics.")) {
    apply_metric_setting(c.metrics, key.substr(8), v);
    return;
  }
  if (key == "model") {
    if (v.empty()) throw ConfigError("model must not be empty");
    c.model = v;
  } else if (key == "temperature") {
    c.temperature = to_double(key, v);
    if (c.temperature < 0) throw ConfigError("temperature must not be negative");
  } else if (key == "provider") {
    if (v != "http" && v != "scripted") throw ConfigError("provider must be http or scripted, got '" + v + "'");
    c.provider = v;
  } else if (key == "script") {
    c.script_path = v;
  } else if (key == "base_url") {
    if (!v.starts_with("http://") && !v.starts_with("https://"))
      throw ConfigError("base_url must start with http:// or https://");
    c.http.base_url = v;
  } else if (key == "api_key_env") {
    if (v.empty()) throw ConfigError("api_key_env must not be empty");
    c.http.api_key_env = v;
  } else if (key == "request_timeout_s") {
    c.http.timeout = std::chrono::seconds(to_int(key, v, 1));
  } else if (key == "max_refinement_iterations") {
    c.max_refinement_iterations = static_cast<int>(to_int(key, v, 0));
  } else if (key == "enable_reinforcement") {
    c.enable_reinforcement = to_bool(key, v);
  } else if (key == "enable_deployment") {
    c.enable_deployment = to_bool(key, v);
  } else if (key == "llm_judge") {
    c.llm_judge = to_bool(key, v);
  } else if (key == "parallelism") {
    c.parallelism = static_cast<int>(to_int(key, v, 1));
  } else if (key == "format_retries") {
    c.format_retries = static_cast<int>(to_int(key, v, 0));
  } else if (key == "max_retries") {
    c.transport.max_retries = static_cast<int>(to_int(key, v, 0));
  } else if (key == "initial_backoff_ms") {
    c.transport.initial_backoff = std::chrono::milliseconds(to_int(key, v, 0));
  } else if (key == "max_response_bytes") {
    c.transport.max_response_bytes = static_cast<std::size_t>(to_int(key, v, 1));
  } else if (key == "compile") {
    c.compile = to_bool(key, v);
  } else if (key == "compiler_dir") {
    c.compiler_dir = v;
  } else if (key == "compile_timeout_s") {
    c.compile_timeout = std::chrono::milliseconds(to_int(key, v, 1) * 1000);
  } else if (key == "compile_initial") {
    c.compile_initial = to_bool(key, v);
  } else if (key == "logical_clock") {
    c.logical_clock = to_bool(key, v);
  } else {
    throw ConfigError("unknown setting '" + std::string(key) + "'");
  }
}

PipelineConfig pipeline_config_from_text(std::string_view text) {
  PipelineConfig config;
  for (const auto& [key, value] : parse_key_values(text)) apply_setting(config, key, value);
  const auto& w = config.metrics.weights;
  const double sum = std::accumulate(w.begin(), w.end(), 0.0);
  if (std::abs(sum - 1.0) > 1e-6) throw ConfigError("metric weights must sum to 1, got " + text::fixed(sum, 4));
  return config;
}

PipelineConfig load_pipeline_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoFailure("cannot read config " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return pipeline_config_from_text(ss.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

}  // namespace solbench
