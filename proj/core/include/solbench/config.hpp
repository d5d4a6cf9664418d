#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>

#include "solbench/pipeline.hpp"

namespace solbench {

/// `key = value` lines; `#` starts a comment; blank lines ignored.
/// Throws ConfigError with the line number on a malformed line.
std::map<std::string, std::string> parse_key_values(std::string_view text);

/// Applies one setting. Pipeline keys: model, temperature, provider, script,
/// base_url, api_key_env, request_timeout_s, max_refinement_iterations,
/// enable_reinforcement, enable_deployment, llm_judge, parallelism,
/// format_retries, max_retries, initial_backoff_ms, max_response_bytes,
/// compile, compiler_dir, compile_timeout_s, compile_initial, logical_clock.
/// Keys prefixed `metrics.` go to apply_metric_setting.
void apply_setting(PipelineConfig& config, std::string_view key, std::string_view value);

PipelineConfig load_pipeline_config(const std::filesystem::path& path);
PipelineConfig pipeline_config_from_text(std::string_view text);

}  // namespace solbench
