#include "solbench/pipeline.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <thread>

#include "json_util.hpp"
#include "solbench/digest.hpp"
#include "solbench/error.hpp"
#include "solbench/prompts.hpp"
#include "solbench/text.hpp"

namespace solbench {

using detail::json;

struct CompileCache {
  std::mutex mutex;
  std::map<std::string, CompileResult> results;
};

std::string_view to_string(EventKind k) {
  switch (k) {
    case EventKind::Started: return "started";
    case EventKind::Completed: return "completed";
    case EventKind::Retried: return "retried";
    case EventKind::RefineTriggered: return "refine_triggered";
    case EventKind::AuditApproved: return "audit_approved";
    case EventKind::Error: return "error";
  }
  return "?";
}

CompletionResponse call_agent(ChatBackend& backend, const AgentConfig& agent, const std::string& user_prompt,
                              const RetryPolicy& policy, AgentCall& call) {
  CompletionRequest request{call.phase, call.entry_id, agent.system_prompt, user_prompt, agent.model,
                            agent.temperature};
  auto backoff = policy.initial_backoff;
  for (int attempt = 0;; ++attempt) {
    try {
      auto response = backend.complete(request);
      if (response.text.size() > policy.max_response_bytes) {
        throw ResponseTooLarge(call.phase + ": response of " + std::to_string(response.text.size()) +
                               " bytes exceeds the " + std::to_string(policy.max_response_bytes) + " byte cap");
      }
      return response;
    } catch (const TransportError& e) {
      if (!e.retryable()) throw BackendUnavailable(call.phase + ": " + e.what());
      if (attempt >= policy.max_retries) {
        throw BackendUnavailable(call.phase + ": gave up after " + std::to_string(attempt + 1) +
                                 " attempts: " + e.what());
      }
      ++call.retries;
      if (call.on_retry) call.on_retry(e.what());
      // Scripted backends replay instantly.
      if (!backend.deterministic() && backoff.count() > 0) std::this_thread::sleep_for(backoff);
      backoff = std::chrono::milliseconds(static_cast<long>(static_cast<double>(backoff.count()) * policy.backoff_factor));
    }
  }
}

namespace {

bool has_word(std::string_view text, std::string_view word) {
  for (auto pos = text.find(word); pos != std::string_view::npos; pos = text.find(word, pos + 1)) {
    const bool left = pos == 0 || !(std::isalnum(static_cast<unsigned char>(text[pos - 1])) || text[pos - 1] == '_');
    const auto after = pos + word.size();
    const bool right =
        after >= text.size() || !(std::isalnum(static_cast<unsigned char>(text[after])) || text[after] == '_');
    if (left && right) return true;
  }
  return false;
}

bool looks_like_solidity(std::string_view code) { return has_word(code, "pragma") || has_word(code, "contract"); }

struct Fence {
  std::string lang;
  std::string body;
};

std::vector<Fence> fenced_blocks(std::string_view text) {
  std::vector<Fence> out;
  std::size_t pos = 0;
  while (true) {
    const auto open = text.find("```", pos);
    if (open == std::string_view::npos) break;
    const auto eol = text.find('\n', open);
    if (eol == std::string_view::npos) break;
    const auto close = text.find("```", eol + 1);
    Fence f;
    f.lang = text::to_lower(text::trim(text.substr(open + 3, eol - open - 3)));
    f.body = std::string(text.substr(eol + 1, close == std::string_view::npos ? std::string_view::npos : close - eol - 1));
    out.push_back(std::move(f));
    if (close == std::string_view::npos) break;
    pos = close + 3;
  }
  return out;
}

}  // namespace

std::string extract_solidity(std::string_view response_text) {
  const auto blocks = fenced_blocks(response_text);
  for (const auto& b : blocks) {
    if ((b.lang == "solidity" || b.lang == "sol") && looks_like_solidity(b.body)) return text::trim(b.body) + "\n";
  }
  for (const auto& b : blocks) {
    if (looks_like_solidity(b.body)) return text::trim(b.body) + "\n";
  }
  if (blocks.empty() && looks_like_solidity(response_text)) return text::trim(response_text) + "\n";
  throw NotSolidity("response holds no Solidity source (no pragma or contract)");
}

std::string extract_json_object(std::string_view response_text) {
  if (auto j = detail::find_json_object(response_text)) return j->dump();
  return std::string(response_text);
}

Pipeline::Pipeline(PipelineConfig config, std::shared_ptr<ChatBackend> backend, CompilerSet compilers)
    : config_(std::move(config)),
      backend_(std::move(backend)),
      compilers_(std::move(compilers)),
      compile_cache_(std::make_shared<CompileCache>()) {
  if (!backend_) throw Error("pipeline needs a chat backend");
  if (config_.max_refinement_iterations < 0) throw DomainError("max_refinement_iterations must be >= 0");
}

namespace {

/// Format retries exhausted.
class PhaseFailure : public Error {
 public:
  using Error::Error;
};

class Clock {
 public:
  explicit Clock(bool logical)
      : logical_(logical),
        start_(std::chrono::steady_clock::now()),
        epoch_ms_(std::chrono::duration_cast<std::chrono::milliseconds>(
                      std::chrono::system_clock::now().time_since_epoch())
                      .count()) {}

  std::int64_t now() {
    if (logical_) return tick_++;
    const auto elapsed = std::chrono::steady_clock::now() - start_;
    return epoch_ms_ + std::chrono::duration_cast<std::chrono::milliseconds>(elapsed).count();
  }
  bool logical() const { return logical_; }

 private:
  bool logical_;
  std::chrono::steady_clock::time_point start_;
  std::int64_t epoch_ms_;
  std::int64_t tick_ = 0;
};

struct Run {
  const Pipeline& pipeline;
  const BenchmarkEntry& entry;
  const EventCallback& on_event;
  PipelineRecord& record;
  Clock clock;

  void emit(const std::string& phase, EventKind kind, std::string detail = {}) {
    PipelineEvent ev{clock.now(), phase, kind, std::move(detail)};
    record.events.push_back(ev);
    if (on_event) on_event(entry.id, ev);
  }

  PhaseArtifact begin(const std::string& phase, std::string_view input) {
    PhaseArtifact a;
    a.phase = phase;
    a.input_digest = sha256_hex(input);
    emit(phase, EventKind::Started);
    a.duration_ms = clock.now();
    return a;
  }

  void finish(PhaseArtifact& a, std::string output, std::string detail = {}) {
    a.output = std::move(output);
    a.output_digest = sha256_hex(a.output);
    a.duration_ms = clock.now() - a.duration_ms;
    record.phase_artifacts.push_back(a);
    emit(a.phase, EventKind::Completed, std::move(detail));
  }

  void fail(PhaseArtifact& a, const std::string& message) {
    a.output_digest = sha256_hex(a.output);
    a.duration_ms = clock.now() - a.duration_ms;
    record.phase_artifacts.push_back(a);
    emit(a.phase, EventKind::Error, message);
  }

  AgentConfig agent(const prompts::AgentPrompt& p) const {
    const auto& c = pipeline.config();
    AgentConfig a;
    a.role = p.role;
    a.goal = p.goal;
    a.system_prompt = p.system_prompt;
    a.model = c.model;
    a.temperature = c.temperature;
    a.max_retries = c.format_retries;
    return a;
  }

  /// Asks the model until `validate` accepts a response, appending a
  /// corrective instruction after each rejected one.
  template <typename Validate>
  auto ask(PhaseArtifact& artifact, const AgentConfig& agent, const std::string& prompt, Validate&& validate)
      -> decltype(validate(std::string{})) {
    std::string current = prompt;
    for (int attempt = 0;; ++attempt) {
      AgentCall call;
      call.phase = artifact.phase;
      call.entry_id = entry.id;
      call.on_retry = [&](const std::string& why) { emit(artifact.phase, EventKind::Retried, "transport: " + why); };
      const auto response = call_agent(pipeline.backend(), agent, current, pipeline.config().transport, call);
      artifact.retry_count += call.retries;
      artifact.responses.push_back({response.text, sha256_hex(response.text)});
      try {
        return validate(response.text);
      } catch (const Error& e) {
        if (attempt >= agent.max_retries) throw PhaseFailure(e.what());
        ++artifact.retry_count;
        emit(artifact.phase, EventKind::Retried, std::string("format: ") + e.what());
        current = prompt + prompts::corrective_suffix(e.what());
      }
    }
  }
};

std::optional<ParseResult> try_parse_surface(std::string_view source) {
  try {
    return parse_surface(source);
  } catch (const UnparseableSource&) {
    return std::nullopt;
  }
}

std::size_t unique_count(const std::vector<std::string>& names) {
  std::vector<std::string> folded;
  for (const auto& n : names) {
    auto f = text::fold_identifier(n);
    if (!f.empty()) folded.push_back(std::move(f));
  }
  std::sort(folded.begin(), folded.end());
  return static_cast<std::size_t>(std::unique(folded.begin(), folded.end()) - folded.begin());
}

MetricScores parse_judge_scores(std::string_view text) {
  const auto j = detail::find_json_object(text);
  if (!j) throw Error("evaluator reply holds no JSON object");
  static constexpr std::array<std::string_view, 5> keys = {"functional_completeness", "variable_fidelity",
                                                          "state_machine_correctness", "business_logic_fidelity",
                                                          "code_quality"};
  std::array<double, 5> values{};
  for (std::size_t i = 0; i < keys.size(); ++i) {
    const auto it = j->find(std::string(keys[i]));
    if (it == j->end() || !it->is_number()) throw Error("evaluator reply lacks numeric " + std::string(keys[i]));
    values[i] = it->get<double>();
    if (!(values[i] >= 0 && values[i] <= 100)) throw Error(std::string(keys[i]) + " is outside [0,100]");
  }
  return MetricScores::from_array(values);
}

std::string compile_summary(const CompileResult& r) {
  std::string out(to_string(r.status));
  if (!r.compiler_version.empty()) out += " " + r.compiler_version;
  if (!r.reason.empty()) out += " (" + r.reason + ")";
  for (const auto& d : r.diagnostics) {
    out += "\n" + d.severity + (d.line ? ":" + std::to_string(*d.line) : "") + ": " + d.message;
  }
  return out;
}

}  // namespace

PipelineRecord Pipeline::run(const BenchmarkEntry& entry, const EventCallback& on_event) const {
  PipelineRecord record;
  record.entry_id = entry.id;
  record.prompt_version = std::string(prompts::kVersion);
  record.model = config_.model;
  Run run{*this, entry, on_event, record, Clock(config_.logical_clock.value_or(backend_->deterministic()))};
  const auto started = run.clock.now();
  const FsmSpec* fsm = entry.fsm ? &*entry.fsm : nullptr;

  if (config_.enable_deployment) record.notes.push_back("deployment is not supported; enable_deployment ignored");

  auto finish_record = [&] {
    record.duration_ms = run.clock.now() - started;
    return record;
  };

  // Phase 1: schema extraction.
  {
    const auto agent = run.agent(prompts::parser());
    const auto prompt = prompts::parse_request(entry.requirement, entry.fsm_text);
    auto artifact = run.begin("parse", agent.system_prompt + "\n" + prompt);
    try {
      record.schema = run.ask(artifact, agent, prompt, [&](const std::string& reply) {
        record.ignored_schema_keys.clear();
        return schema_from_json(extract_json_object(reply), &record.ignored_schema_keys);
      });
      std::string flags;
      for (const auto& f : validate_schema(*record.schema)) {
        flags += std::string(flags.empty() ? "" : ", ") + std::string(to_string(f.kind)) + " \"" + f.subject + "\"";
      }
      if (!flags.empty()) record.notes.push_back("schema flags: " + flags);
      run.finish(artifact, schema_to_json(*record.schema));
    } catch (const BackendUnavailable& e) {
      record.failed = true;
      run.fail(artifact, e.what());
    } catch (const Error& e) {
      record.failed = true;
      run.fail(artifact, e.what());
    }
  }
  if (!record.schema) {
    record.quality = empty_quality_report();
    return finish_record();
  }
  const auto& schema = *record.schema;
  record.complexity = classify_complexity(static_cast<int>(unique_count(schema.conditions.function_names)),
                                          static_cast<int>(unique_count(schema.conditions.state_names)));
  const auto schema_json = schema_to_json(schema);

  // Phase 2: generation.
  {
    const auto agent = run.agent(prompts::generator());
    const auto prompt = prompts::generate_request(schema_json, entry.requirement);
    auto artifact = run.begin("generate", agent.system_prompt + "\n" + prompt);
    try {
      record.initial_contract = run.ask(artifact, agent, prompt, [](const std::string& r) { return extract_solidity(r); });
      run.finish(artifact, record.initial_contract);
    } catch (const Error& e) {
      record.failed = true;
      run.fail(artifact, e.what());
    }
  }
  if (record.initial_contract.empty()) {
    record.quality = empty_quality_report();
    return finish_record();
  }
  std::string contract = record.initial_contract;

  // Phases 3 and 4: audit, then refine while the decisive report asks for it.
  RefinementState state;
  state.max_iterations = config_.enable_reinforcement ? config_.max_refinement_iterations : 0;
  bool backend_lost = false;
  for (int round = 0;; ++round) {
    const std::string audit_phase = round == 0 ? "audit" : "audit." + std::to_string(round);
    const auto agent = run.agent(prompts::auditor());
    const auto prompt = prompts::audit_request(contract);
    auto artifact = run.begin(audit_phase, agent.system_prompt + "\n" + prompt);
    std::optional<AuditReport> heuristic;
    if (auto parsed = try_parse_surface(contract)) heuristic = heuristic_audit(parsed->surface, contract);
    std::optional<AuditReport> decisive;
    std::string problem;
    try {
      const auto llm = run.ask(artifact, agent, prompt, [](const std::string& r) {
        auto report = parse_audit_json(r);
        report.source = AuditSource::Llm;
        return report;
      });
      decisive = heuristic ? decisive_report(llm, *heuristic) : llm;
      if (heuristic && decisive->source == AuditSource::Heuristic)
        decisive->notes.push_back("pattern audit was more severe than the model's report");
    } catch (const BackendUnavailable& e) {
      problem = e.what();
      backend_lost = true;
    } catch (const Error& e) {
      problem = e.what();
    }
    if (!decisive && heuristic && !backend_lost) {
      decisive = *heuristic;
      decisive->notes.push_back("model audit unusable (" + problem + "); pattern audit used");
    }
    if (!decisive) {
      run.fail(artifact, problem.empty() ? "contract could not be audited" : problem);
      if (backend_lost) record.failed = true;
      break;
    }
    run.finish(artifact, audit_report_to_json(*decisive), std::string(to_string(decisive->severity_level)));
    record.audit_trail.push_back(*decisive);
    state.history.emplace_back(*decisive, sha256_hex(contract));

    if (decisive->approved) run.emit(audit_phase, EventKind::AuditApproved);
    if (!should_refine(*decisive, state)) break;
    const std::string refine_phase = "refine." + std::to_string(round + 1);
    run.emit(refine_phase, EventKind::RefineTriggered,
             std::string(to_string(decisive->severity_level)) + ", " + std::to_string(decisive->findings.size()) +
                 " findings");
    const auto ragent = run.agent(prompts::refiner());
    const auto rprompt = prompts::refine_request(contract, audit_report_to_json(*decisive));
    auto rartifact = run.begin(refine_phase, ragent.system_prompt + "\n" + rprompt);
    try {
      contract = run.ask(rartifact, ragent, rprompt, [](const std::string& r) { return extract_solidity(r); });
      ++state.refinement_count;
      run.finish(rartifact, contract);
    } catch (const BackendUnavailable& e) {
      record.failed = true;
      run.fail(rartifact, e.what());
      break;
    } catch (const Error& e) {
      run.fail(rartifact, e.what());
      break;
    }
  }
  record.refinements = state.refinement_count;
  record.final_contract = contract;

  // Phase 5: ABI, derived from the parsed surface.
  std::optional<ParseResult> parsed;
  {
    auto artifact = run.begin("abi", contract);
    parsed = try_parse_surface(contract);
    if (parsed) {
      const auto abi = export_abi(parsed->surface);
      for (const auto& w : abi.warnings) record.notes.push_back("abi: " + w.entry + ": " + w.type_text + ": " + w.message);
      record.abi_json = abi_to_json(abi.entries);
      run.finish(artifact, record.abi_json);
    } else {
      run.fail(artifact, "no contract declaration found in the final source");
    }
  }

  // Compilation gate.
  {
    auto artifact = run.begin("compile", contract);
    auto compile = [&](const std::string& source) {
      CompileResult r;
      if (!config_.compile) {
        r.reason = "compilation disabled";
        return r;
      }
      const auto key = sha256_hex(source);
      {
        std::lock_guard lock(compile_cache_->mutex);
        if (auto it = compile_cache_->results.find(key); it != compile_cache_->results.end()) return it->second;
      }
      r = compile_check(source, config_.compile_timeout, compilers_);
      if (run.clock.logical()) r.duration = std::chrono::milliseconds(0);
      std::lock_guard lock(compile_cache_->mutex);
      compile_cache_->results.emplace(key, r);
      return r;
    };
    record.compile = compile(contract);
    if (record.refinements == 0) {
      record.initial_compile = record.compile;
    } else if (config_.compile_initial) {
      record.initial_compile = compile(record.initial_contract);
    }
    run.finish(artifact, compile_summary(record.compile), std::string(to_string(record.compile.status)));
  }

  // Quality evaluation.
  {
    auto artifact = run.begin("evaluate", schema_json + "\n" + contract);
    if (parsed) {
      record.lint = lint_forbidden_patterns(parsed->surface, contract);
      record.quality = evaluate_quality(schema, fsm, parsed->surface, contract, record.lint, config_.metrics);
      if (config_.llm_judge) {
        const auto agent = run.agent(prompts::evaluator());
        const auto prompt = prompts::evaluate_request(schema_json, contract);
        try {
          const auto scores = run.ask(artifact, agent, prompt, [](const std::string& r) { return parse_judge_scores(r); });
          auto judged = report_from_scores(scores, ScoreSource::LlmJudge, config_.metrics);
          judged.evidence = record.quality.evidence;
          judged.components = record.quality.components;
          judged.notes.push_back("scores from the evaluator model; evidence from deterministic scoring");
          record.quality = std::move(judged);
        } catch (const BackendUnavailable& e) {
          record.failed = true;
          record.quality.notes.push_back(std::string("evaluator unavailable, deterministic scores kept: ") + e.what());
        } catch (const Error& e) {
          record.quality.notes.push_back(std::string("evaluator reply unusable, deterministic scores kept: ") + e.what());
        }
      }
      run.finish(artifact, quality_report_to_json(record.quality), text::fixed(record.quality.composite, 2));
    } else {
      record.quality = empty_quality_report();
      record.quality.notes.push_back("final source has no contract declaration");
      run.fail(artifact, "final source has no contract declaration");
    }
  }
  record.error_modes = classify_error_modes(record.quality, record.compile, config_.metrics);

  // Ground-truth comparison.
  if (!entry.ground_truth_code.empty() && parsed) {
    auto artifact = run.begin("compare", entry.ground_truth_code);
    if (auto gt = try_parse_surface(entry.ground_truth_code)) {
      const auto gt_lint = lint_forbidden_patterns(gt->surface, entry.ground_truth_code);
      auto gt_report = evaluate_quality(schema, fsm, gt->surface, entry.ground_truth_code, gt_lint, config_.metrics);
      record.comparison = compare_reports(record.quality, std::move(gt_report));
      run.finish(artifact, paired_result_to_json(*record.comparison));
    } else {
      run.fail(artifact, "ground-truth code has no contract declaration");
    }
  }
  return finish_record();
}

PipelineRecord run_pipeline(const BenchmarkEntry& entry, const Pipeline& pipeline, const EventCallback& on_event) {
  return pipeline.run(entry, on_event);
}

}  // namespace solbench
