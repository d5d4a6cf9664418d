#include <algorithm>

#include "json_util.hpp"
#include "solbench/error.hpp"
#include "solbench/pipeline.hpp"

namespace solbench {

using detail::json;

namespace {

json scores_json(const MetricScores& s) {
  return {{"m1_functional", s.m1_functional},
          {"m2_variable", s.m2_variable},
          {"m3_state_machine", s.m3_state_machine},
          {"m4_business_logic", s.m4_business_logic},
          {"m5_code_quality", s.m5_code_quality}};
}

MetricScores scores_from(const json& j, const std::string& path) {
  if (!j.is_object()) throw Error(path + ": expected an object");
  auto get = [&](const char* key) {
    auto it = j.find(key);
    if (it == j.end() || !it->is_number()) throw Error(path + "." + key + ": expected a number");
    return it->get<double>();
  };
  return {get("m1_functional"), get("m2_variable"), get("m3_state_machine"), get("m4_business_logic"),
          get("m5_code_quality")};
}

json quality_json(const QualityReport& r) {
  json evidence = json::array();
  for (std::size_t m = 0; m < r.evidence.size(); ++m) {
    json items = json::array();
    for (const auto& e : r.evidence[m]) {
      items.push_back({{"criterion", e.criterion}, {"matched", e.matched}, {"missed", e.missed}});
    }
    evidence.push_back({{"metric", kMetricNames[m]}, {"items", items}});
  }
  return {{"scores", scores_json(r.scores)},
          {"composite", r.composite},
          {"grade", to_string(r.grade)},
          {"source_of_scores", to_string(r.source_of_scores)},
          {"components", r.components},
          {"evidence", evidence},
          {"notes", r.notes}};
}

json audit_json(const AuditReport& r) {
  json findings = json::array();
  for (const auto& f : r.findings) {
    json j = {{"category", to_string(f.category)},
              {"severity", to_string(f.severity)},
              {"function", f.function},
              {"remediation", f.remediation}};
    j["line"] = f.line ? json(*f.line) : json(nullptr);
    findings.push_back(std::move(j));
  }
  return {{"severity_level", to_string(r.severity_level)},
          {"approved", r.approved},
          {"summary", r.summary},
          {"source", to_string(r.source)},
          {"invariant_mismatch", r.invariant_mismatch},
          {"findings", findings},
          {"notes", r.notes}};
}

json delta_json(const MetricDelta& d) {
  return {{"absolute", d.absolute}, {"percent", d.percent ? json(*d.percent) : json(nullptr)}};
}

json paired_json(const PairedResult& p) {
  json deltas = json::array();
  for (const auto& d : p.deltas) deltas.push_back(delta_json(d));
  return {{"generated", quality_json(p.generated)},
          {"ground_truth", quality_json(p.ground_truth)},
          {"deltas", deltas},
          {"composite_delta", p.composite_delta}};
}

json compile_json(const CompileResult& c) {
  json diags = json::array();
  for (const auto& d : c.diagnostics) {
    diags.push_back({{"severity", d.severity}, {"message", d.message}, {"line", d.line ? json(*d.line) : json(nullptr)}});
  }
  return {{"status", to_string(c.status)},
          {"compiler_version", c.compiler_version},
          {"diagnostics", diags},
          {"duration_ms", c.duration.count()},
          {"reason", c.reason}};
}

json error_modes_json(const ErrorModeResult& r) {
  json modes = json::array();
  for (auto m : r.modes) modes.push_back(to_string(m));
  return {{"modes", modes}, {"primary", r.primary ? json(to_string(*r.primary)) : json(nullptr)}};
}

const json& member(const json& j, const char* key, const std::string& path) {
  auto it = j.find(key);
  if (it == j.end()) throw Error(path + ": missing '" + key + "'");
  return *it;
}

CompileStatus compile_status_from(const json& j, const std::string& path) {
  const auto& s = member(j, "status", path);
  if (!s.is_string()) throw Error(path + ".status: expected a string");
  auto status = parse_compile_status(s.get<std::string>());
  if (!status) throw Error(path + ".status: unknown value");
  return *status;
}

Severity severity_from(const json& audit, const std::string& path) {
  const auto& s = member(audit, "severity_level", path);
  auto sev = s.is_string() ? parse_severity(s.get<std::string>()) : std::nullopt;
  if (!sev) throw Error(path + ".severity_level: unknown value");
  return *sev;
}

}  // namespace

std::string quality_report_to_json(const QualityReport& report) { return quality_json(report).dump(2); }
std::string paired_result_to_json(const PairedResult& result) { return paired_json(result).dump(2); }
std::string audit_report_to_json(const AuditReport& report) { return audit_json(report).dump(2); }

std::string record_to_json(const PipelineRecord& r) {
  json artifacts = json::array();
  for (const auto& a : r.phase_artifacts) {
    json responses = json::array();
    for (const auto& s : a.responses) responses.push_back({{"text", s.text}, {"digest", s.digest}});
    artifacts.push_back({{"phase", a.phase},
                         {"input_digest", a.input_digest},
                         {"output", a.output},
                         {"output_digest", a.output_digest},
                         {"responses", responses},
                         {"duration_ms", a.duration_ms},
                         {"retry_count", a.retry_count}});
  }
  json events = json::array();
  for (const auto& e : r.events) {
    events.push_back(
        {{"timestamp_ms", e.timestamp_ms}, {"phase", e.phase}, {"kind", to_string(e.kind)}, {"detail", e.detail}});
  }
  json audits = json::array();
  for (const auto& a : r.audit_trail) audits.push_back(audit_json(a));
  json lint = json::array();
  for (const auto& f : r.lint) {
    lint.push_back({{"pattern", to_string(f.pattern)}, {"line", f.location}, {"detail", f.detail}});
  }

  json j;
  j["entry_id"] = r.entry_id;
  j["failed"] = r.failed;
  j["prompt_version"] = r.prompt_version;
  j["model"] = r.model;
  j["phase_artifacts"] = artifacts;
  j["events"] = events;
  j["schema"] = r.schema ? json::parse(schema_to_json(*r.schema)) : json(nullptr);
  j["ignored_schema_keys"] = r.ignored_schema_keys;
  if (r.complexity) {
    j["complexity"] = {{"tier", to_string(r.complexity->tier)},
                       {"function_count", r.complexity->function_count},
                       {"state_count", r.complexity->state_count},
                       {"degenerate", r.complexity->degenerate}};
  } else {
    j["complexity"] = nullptr;
  }
  j["initial_contract"] = r.initial_contract;
  j["final_contract"] = r.final_contract;
  j["audit_trail"] = audits;
  j["refinements"] = r.refinements;
  j["abi"] = r.abi_json.empty() ? json(nullptr) : json::parse(r.abi_json);
  j["compile"] = compile_json(r.compile);
  j["initial_compile"] = r.initial_compile ? compile_json(*r.initial_compile) : json(nullptr);
  j["lint"] = lint;
  j["quality"] = quality_json(r.quality);
  j["comparison"] = r.comparison ? paired_json(*r.comparison) : json(nullptr);
  j["error_modes"] = r.error_modes ? error_modes_json(*r.error_modes) : json(nullptr);
  j["duration_ms"] = r.duration_ms;
  j["notes"] = r.notes;
  return j.dump(2) + "\n";
}

RecordStats record_stats(const PipelineRecord& r) {
  RecordStats s;
  s.entry_id = r.entry_id;
  s.failed = r.failed;
  s.processing_seconds = static_cast<double>(r.duration_ms) / 1000.0;
  s.scores = r.quality.scores;
  s.composite = r.quality.composite;
  s.grade = r.quality.grade;
  s.compile = r.compile.status;
  s.initial_compile = r.initial_compile ? r.initial_compile->status : r.compile.status;
  if (r.complexity) s.tier = r.complexity->tier;
  if (r.error_modes) {
    s.error_modes = r.error_modes->modes;
    s.primary_error_mode = r.error_modes->primary;
  }
  if (r.comparison) {
    s.gt_scores = r.comparison->ground_truth.scores;
    s.gt_composite = r.comparison->ground_truth.composite;
  }
  s.refinements = r.refinements;
  auto critical = [](const AuditReport& a) {
    return static_cast<int>(std::count_if(a.findings.begin(), a.findings.end(),
                                          [](const AuditFinding& f) { return f.severity == Severity::Critical; }));
  };
  if (!r.audit_trail.empty()) {
    const auto& first = r.audit_trail.front();
    const auto& last = r.audit_trail.back();
    s.audited = true;
    s.initial_severity = first.severity_level;
    s.final_severity = last.severity_level;
    s.initial_findings = static_cast<int>(first.findings.size());
    s.final_findings = static_cast<int>(last.findings.size());
    s.initial_critical = critical(first);
    s.final_critical = critical(last);
  }
  return s;
}

namespace {

RecordStats stats_from(std::string_view record_json) {
  const auto parsed = detail::try_parse(record_json);
  if (!parsed || !parsed->is_object()) throw Error("record is not a JSON object");
  const json& j = *parsed;
  RecordStats s;
  const auto& id = member(j, "entry_id", "record");
  if (!id.is_string()) throw Error("record.entry_id: expected a string");
  s.entry_id = id.get<std::string>();
  s.failed = j.value("failed", false);
  s.processing_seconds = static_cast<double>(j.value("duration_ms", std::int64_t{0})) / 1000.0;

  const auto& q = member(j, "quality", "record");
  s.scores = scores_from(member(q, "scores", "record.quality"), "record.quality.scores");
  s.composite = member(q, "composite", "record.quality").get<double>();
  const auto grade = parse_grade(member(q, "grade", "record.quality").get<std::string>());
  if (!grade) throw Error("record.quality.grade: unknown value");
  s.grade = *grade;

  s.compile = compile_status_from(member(j, "compile", "record"), "record.compile");
  const auto& ic = member(j, "initial_compile", "record");
  s.initial_compile = ic.is_null() ? s.compile : compile_status_from(ic, "record.initial_compile");

  if (const auto& c = member(j, "complexity", "record"); !c.is_null()) {
    const auto tier = c.value("tier", "");
    for (auto t : {Tier::Low, Tier::Medium, Tier::High})
      if (to_string(t) == tier) s.tier = t;
    if (!s.tier) throw Error("record.complexity.tier: unknown value");
  }
  if (const auto& em = member(j, "error_modes", "record"); !em.is_null()) {
    for (const auto& m : member(em, "modes", "record.error_modes")) {
      auto mode = m.is_string() ? parse_error_mode(m.get<std::string>()) : std::nullopt;
      if (!mode) throw Error("record.error_modes.modes: unknown value");
      s.error_modes.push_back(*mode);
    }
    if (const auto& p = member(em, "primary", "record.error_modes"); !p.is_null()) {
      s.primary_error_mode = parse_error_mode(p.get<std::string>());
      if (!s.primary_error_mode) throw Error("record.error_modes.primary: unknown value");
    }
  }
  if (const auto& cmp = member(j, "comparison", "record"); !cmp.is_null()) {
    const auto& gt = member(cmp, "ground_truth", "record.comparison");
    s.gt_scores = scores_from(member(gt, "scores", "record.comparison.ground_truth"),
                              "record.comparison.ground_truth.scores");
    s.gt_composite = member(gt, "composite", "record.comparison.ground_truth").get<double>();
  }
  s.refinements = j.value("refinements", 0);
  const auto& trail = member(j, "audit_trail", "record");
  if (!trail.is_array()) throw Error("record.audit_trail: expected an array");
  if (!trail.empty()) {
    auto critical = [](const json& a) {
      int n = 0;
      for (const auto& f : member(a, "findings", "record.audit_trail[]"))
        if (f.value("severity", "") == to_string(Severity::Critical)) ++n;
      return n;
    };
    const auto& first = trail.front();
    const auto& last = trail.back();
    s.audited = true;
    s.initial_severity = severity_from(first, "record.audit_trail[0]");
    s.final_severity = severity_from(last, "record.audit_trail[-1]");
    s.initial_findings = static_cast<int>(member(first, "findings", "record.audit_trail[0]").size());
    s.final_findings = static_cast<int>(member(last, "findings", "record.audit_trail[-1]").size());
    s.initial_critical = critical(first);
    s.final_critical = critical(last);
  }
  return s;
}

}  // namespace

RecordStats record_stats_from_json(std::string_view record_json) {
  try {
    return stats_from(record_json);
  } catch (const json::exception& e) {
    throw Error(std::string("record has an unexpected shape: ") + e.what());
  }
}

}  // namespace solbench
