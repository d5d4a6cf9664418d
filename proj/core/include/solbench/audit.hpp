#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "solbench/surface.hpp"

namespace solbench {

enum class Severity { None, Low, Medium, High, Critical };

std::string_view to_string(Severity s);
std::optional<Severity> parse_severity(std::string_view s);

enum class AuditCategory {
  Reentrancy,
  AccessControl,
  ArithmeticSafety,
  EtherHandling,
  DenialOfService,
  InputValidation,
  TimestampDependence,
  ExternalCallSafety,
};

inline constexpr int kAuditCategoryCount = 8;

std::string_view to_string(AuditCategory c);
/// Accepts `Reentrancy`, `access_control`, `Access Control`, ...
std::optional<AuditCategory> parse_category(std::string_view s);

struct AuditFinding {
  AuditCategory category = AuditCategory::Reentrancy;
  Severity severity = Severity::None;
  std::optional<int> line;
  std::string function;
  std::string remediation;
};

enum class AuditSource { Heuristic, Llm };

std::string_view to_string(AuditSource s);

struct AuditReport {
  Severity severity_level = Severity::None;
  bool approved = true;
  std::vector<AuditFinding> findings;
  std::string summary;
  AuditSource source = AuditSource::Heuristic;
  /// `approved` disagrees with the severity rule, or the declared level
  /// disagreed with the findings.
  bool invariant_mismatch = false;
  std::vector<std::string> notes;
};

Severity severity_max(Severity a, Severity b);
Severity max_finding_severity(const std::vector<AuditFinding>& findings);

struct RefinementState {
  int refinement_count = 0;
  int max_iterations = 2;
  /// (report, contract revision id) per audit, oldest first.
  std::vector<std::pair<AuditReport, std::string>> history;
};

bool should_refine(const AuditReport& report, const RefinementState& state);
bool should_refine(Severity severity, bool approved, int refinement_count, int max_iterations);

/// Deterministic pattern audit; approved iff severity <= low.
AuditReport heuristic_audit(const ContractSurface& surface, std::string_view source);

/// Parses the auditor's JSON (`severity_level`, `approved`, `findings[]` with
/// `category`, `severity`, `line`, `remediation`). The level is the max over
/// findings; a declared level that disagrees is noted. Throws Error when the
/// text holds no usable JSON object.
AuditReport parse_audit_json(std::string_view text);

/// Picks the report that drives refinement: the more severe one, the model's
/// report on ties.
const AuditReport& decisive_report(const AuditReport& llm, const AuditReport& heuristic);

}  // namespace solbench
