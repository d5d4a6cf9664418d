#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "solbench/abi.hpp"
#include "solbench/audit.hpp"
#include "solbench/backend.hpp"
#include "solbench/compile.hpp"
#include "solbench/dataset.hpp"
#include "solbench/lint.hpp"
#include "solbench/metrics.hpp"
#include "solbench/paired.hpp"
#include "solbench/schema.hpp"

namespace solbench {

struct AgentConfig {
  std::string role;
  std::string goal;
  std::string system_prompt;
  std::string model = "gpt-4o-mini";
  double temperature = 0;
  /// Corrective re-asks after an unusable (malformed) response.
  int max_retries = 1;
};

struct RetryPolicy {
  /// Transport retries after the first attempt.
  int max_retries = 3;
  std::chrono::milliseconds initial_backoff{500};
  double backoff_factor = 2.0;
  std::size_t max_response_bytes = 1 << 20;
};

struct PipelineConfig {
  std::string model = "gpt-4o-mini";
  double temperature = 0;
  int max_refinement_iterations = 2;
  bool enable_reinforcement = true;
  bool enable_deployment = false;
  /// Take M1-M5 from the evaluator agent (composite still recomputed).
  bool llm_judge = false;
  int format_retries = 1;
  int parallelism = 1;
  RetryPolicy transport;
  MetricConfig metrics;

  std::string provider = "http";
  std::filesystem::path script_path;
  HttpBackendOptions http;

  bool compile = true;
  std::filesystem::path compiler_dir;
  std::chrono::milliseconds compile_timeout{120000};
  /// Compile the pre-refinement contract too (before/after accounting).
  bool compile_initial = true;

  /// Logical timestamps (1 ms per event) for byte-reproducible records.
  /// Defaults on for deterministic backends.
  std::optional<bool> logical_clock;
};

enum class EventKind { Started, Completed, Retried, RefineTriggered, AuditApproved, Error };

std::string_view to_string(EventKind k);

struct PipelineEvent {
  std::int64_t timestamp_ms = 0;
  std::string phase;
  EventKind kind = EventKind::Started;
  std::string detail;
};

struct StoredResponse {
  std::string text;
  std::string digest;
};

struct PhaseArtifact {
  std::string phase;
  std::string input_digest;
  std::string output;
  std::string output_digest;
  /// Raw model responses, verbatim, one per attempt.
  std::vector<StoredResponse> responses;
  std::int64_t duration_ms = 0;
  int retry_count = 0;
};

/// Append-only provenance of one pipeline run.
struct PipelineRecord {
  std::string entry_id;
  bool failed = false;
  std::string prompt_version;
  std::string model;
  std::vector<PhaseArtifact> phase_artifacts;
  std::vector<PipelineEvent> events;
  std::optional<ContractSchema> schema;
  std::vector<std::string> ignored_schema_keys;
  std::optional<ComplexityTier> complexity;
  std::string initial_contract;
  std::string final_contract;
  std::vector<AuditReport> audit_trail;
  int refinements = 0;
  std::string abi_json;
  CompileResult compile;
  std::optional<CompileResult> initial_compile;
  std::vector<LintFinding> lint;
  QualityReport quality;
  std::optional<PairedResult> comparison;
  std::optional<ErrorModeResult> error_modes;
  std::int64_t duration_ms = 0;
  std::vector<std::string> notes;
};

using EventCallback = std::function<void(const std::string& entry_id, const PipelineEvent&)>;

/// Per-call context used by call_agent to record provenance.
struct AgentCall {
  std::string phase;
  std::string entry_id;
  /// Transport retries performed.
  int retries = 0;
  std::function<void(const std::string& detail)> on_retry;
};

/// Sends system + user messages; retries retryable transport failures with
/// exponential backoff. Throws BackendUnavailable when attempts run out and
/// ResponseTooLarge over the configured cap.
CompletionResponse call_agent(ChatBackend& backend, const AgentConfig& agent,
                              const std::string& user_prompt, const RetryPolicy& policy,
                              AgentCall& call);

/// Strips Markdown code fences; throws NotSolidity without `pragma`/`contract`.
std::string extract_solidity(std::string_view response_text);

/// First balanced JSON object in the text (fences and prose tolerated);
/// returns the input unchanged when none is found.
std::string extract_json_object(std::string_view response_text);

struct CompileCache;

class Pipeline {
 public:
  Pipeline(PipelineConfig config, std::shared_ptr<ChatBackend> backend, CompilerSet compilers);

  /// Never throws for per-entry failures; they are recorded as error events.
  PipelineRecord run(const BenchmarkEntry& entry, const EventCallback& on_event = {}) const;

  const PipelineConfig& config() const { return config_; }
  ChatBackend& backend() const { return *backend_; }
  const CompilerSet& compilers() const { return compilers_; }

 private:
  PipelineConfig config_;
  std::shared_ptr<ChatBackend> backend_;
  CompilerSet compilers_;
  /// Compile results by source digest, shared by every run of this pipeline.
  std::shared_ptr<CompileCache> compile_cache_;
};

PipelineRecord run_pipeline(const BenchmarkEntry& entry, const Pipeline& pipeline,
                            const EventCallback& on_event = {});

std::string record_to_json(const PipelineRecord& record);
RecordStats record_stats(const PipelineRecord& record);
/// Reads the stats back out of a stored record file's JSON.
RecordStats record_stats_from_json(std::string_view record_json);

std::string quality_report_to_json(const QualityReport& report);
std::string paired_result_to_json(const PairedResult& result);
std::string audit_report_to_json(const AuditReport& report);

struct BatchOptions {
  std::filesystem::path output_dir;
  int parallelism = 1;
  /// Skip entries already listed in the index.
  bool resume = false;
  /// Stop after this many newly processed entries (0 = no limit).
  std::size_t limit = 0;
  EventCallback on_event;
};

struct BatchResult {
  BatchSummary summary;
  std::size_t processed = 0;
  std::size_t skipped = 0;
  std::size_t failed = 0;
  std::vector<LineError> line_errors;
};

/// Output layout under `output_dir`:
///   records/<entry id>.json  one record per entry (written atomically)
///   index.jsonl              one line per finished entry; appended during the
///                            run, rewritten sorted by id when it completes
///   summary.json, summary.md
/// Throws IoFailure when the output directory cannot be written.
BatchResult run_batch(JsonlReader& entries, const Pipeline& pipeline, const BatchOptions& options);

/// File-name-safe form of an entry id.
std::string record_file_name(std::string_view entry_id);

}  // namespace solbench
