#include "solbench/audit.hpp"

#include <algorithm>
#include <array>

#include "json_util.hpp"
#include "lexer.hpp"
#include "solbench/error.hpp"
#include "solbench/text.hpp"
#include "solbench/version.hpp"

namespace solbench {

namespace {

constexpr std::array<std::string_view, 5> kSeverityNames = {"none", "low", "medium", "high", "critical"};
constexpr std::array<std::string_view, kAuditCategoryCount> kCategoryNames = {
    "Reentrancy",      "AccessControl",   "ArithmeticSafety",    "EtherHandling",
    "DenialOfService", "InputValidation", "TimestampDependence", "ExternalCallSafety"};

bool is_reentrancy_guard(std::string_view modifier) {
  const auto lower = text::to_lower(modifier);
  return lower.find("reentran") != std::string::npos || lower.find("mutex") != std::string::npos ||
         lower == "lock" || lower == "locked" || lower == "noreentry";
}

bool is_address_type(std::string_view type) { return type == "address" || type == "address payable"; }

bool checks_against_zero(const Guard& g, const std::string& name) {
  if (std::find(g.identifiers.begin(), g.identifiers.end(), name) == g.identifiers.end()) return false;
  std::string compact;
  for (char c : g.condition)
    if (c != ' ') compact.push_back(c);
  return compact.find("address(0)") != std::string::npos || compact.find("address(0x0)") != std::string::npos ||
         compact.find("!=0x0") != std::string::npos;
}

/// Guards that run for `fn`: its own plus those of the modifiers it invokes.
std::vector<const Guard*> effective_guards(const ContractSurface& surface, const FunctionDecl& fn) {
  std::vector<const Guard*> out;
  for (const auto& g : fn.facts.guards) out.push_back(&g);
  for (const auto& use : fn.modifier_uses) {
    if (const auto* mod = surface.find_modifier(use.name))
      for (const auto& g : mod->facts.guards) out.push_back(&g);
  }
  return out;
}

void add(AuditReport& r, AuditCategory c, Severity s, int line, const std::string& fn, std::string remediation) {
  r.findings.push_back({c, s, line, fn, std::move(remediation)});
}

}  // namespace

std::string_view to_string(Severity s) { return kSeverityNames[static_cast<std::size_t>(s)]; }

std::optional<Severity> parse_severity(std::string_view s) {
  const auto lower = text::to_lower(text::trim(s));
  for (std::size_t i = 0; i < kSeverityNames.size(); ++i)
    if (kSeverityNames[i] == lower) return static_cast<Severity>(i);
  if (lower == "informational" || lower == "info") return Severity::Low;
  return std::nullopt;
}

std::string_view to_string(AuditCategory c) { return kCategoryNames[static_cast<std::size_t>(c)]; }

std::optional<AuditCategory> parse_category(std::string_view s) {
  const auto folded = text::fold_identifier(text::trim(s));
  std::string squeezed;
  for (char c : folded)
    if (c != ' ' && c != '-') squeezed.push_back(c);
  for (std::size_t i = 0; i < kCategoryNames.size(); ++i)
    if (text::to_lower(kCategoryNames[i]) == squeezed) return static_cast<AuditCategory>(i);
  if (squeezed == "integeroverflow" || squeezed == "overflow" || squeezed == "arithmetic")
    return AuditCategory::ArithmeticSafety;
  if (squeezed == "dos") return AuditCategory::DenialOfService;
  if (squeezed == "timestamp") return AuditCategory::TimestampDependence;
  if (squeezed == "uncheckedcall" || squeezed == "externalcalls") return AuditCategory::ExternalCallSafety;
  return std::nullopt;
}

std::string_view to_string(AuditSource s) { return s == AuditSource::Llm ? "llm" : "heuristic"; }

Severity severity_max(Severity a, Severity b) { return std::max(a, b); }

Severity max_finding_severity(const std::vector<AuditFinding>& findings) {
  Severity out = Severity::None;
  for (const auto& f : findings) out = severity_max(out, f.severity);
  return out;
}

bool should_refine(Severity severity, bool approved, int refinement_count, int max_iterations) {
  if (refinement_count >= max_iterations) return false;
  return !approved && severity >= Severity::Medium;
}

bool should_refine(const AuditReport& report, const RefinementState& state) {
  return should_refine(report.severity_level, report.approved, state.refinement_count, state.max_iterations);
}

AuditReport heuristic_audit(const ContractSurface& surface, std::string_view source) {
  AuditReport r;
  r.source = AuditSource::Heuristic;

  bool safemath = false;
  for (const auto& t : detail::lex(source).tokens) {
    if (t.kind == detail::TokKind::Ident && t.text == "SafeMath") {
      safemath = true;
      break;
    }
  }
  const bool unchecked_arithmetic = pragmas_predate_checked_arithmetic(surface.pragma_versions) && !safemath;

  for (const auto& fn : surface.functions) {
    if (!fn.body_present) continue;
    const auto& facts = fn.facts;
    const auto guards = effective_guards(surface, fn);

    const bool guarded = std::any_of(fn.modifiers.begin(), fn.modifiers.end(), is_reentrancy_guard);
    if (!guarded) {
      for (const auto& call : facts.calls) {
        if (call.kind == CallKind::EtherTransfer) continue;
        const auto later = std::find_if(facts.writes.begin(), facts.writes.end(),
                                        [&](const StateWrite& w) { return w.position > call.position; });
        if (later != facts.writes.end()) {
          add(r, AuditCategory::Reentrancy, Severity::High, call.line, fn.name,
              "Update " + later->variable + " before the external call or add a reentrancy guard");
          break;
        }
      }
    }

    if (fn.body_stats.state_write_count > 0 && !fn.is_special() &&
        (fn.visibility == Visibility::Public || fn.visibility == Visibility::External ||
         fn.visibility == Visibility::Default) &&
        fn.modifiers.empty() &&
        std::none_of(guards.begin(), guards.end(), [](const Guard* g) { return g->mentions_sender; })) {
      add(r, AuditCategory::AccessControl, Severity::Medium, fn.line, fn.name,
          "Restrict who may call " + fn.name + " with a modifier or a msg.sender check");
    }

    if (unchecked_arithmetic && facts.has_arithmetic) {
      add(r, AuditCategory::ArithmeticSafety, Severity::Medium, fn.line, fn.name,
          "Use SafeMath or a compiler version with checked arithmetic");
    }

    if (fn.mutability == Mutability::Payable) {
      const bool any_guard = std::any_of(guards.begin(), guards.end(), [](const Guard* g) {
        return g->kind != GuardKind::If || g->reverts;
      });
      if (!any_guard) {
        add(r, AuditCategory::EtherHandling, Severity::Medium, fn.line, fn.name,
            "Validate msg.value and the caller before accepting ether in " + fn.name);
      }
    }

    for (const auto& call : facts.calls) {
      if (call.in_loop) {
        add(r, AuditCategory::DenialOfService, Severity::Low, call.line, fn.name,
            "Avoid external calls inside loops; prefer a pull-payment pattern");
        break;
      }
    }

    if (fn.externally_visible()) {
      for (const auto& p : fn.params) {
        if (p.name.empty() || !is_address_type(p.type)) continue;
        const bool checked =
            std::any_of(guards.begin(), guards.end(), [&](const Guard* g) { return checks_against_zero(*g, p.name); });
        if (!checked) {
          add(r, AuditCategory::InputValidation, Severity::Low, fn.line, fn.name,
              "Reject the zero address for parameter " + p.name);
        }
      }
    }

    const bool timed_guard =
        std::any_of(guards.begin(), guards.end(), [](const Guard* g) { return g->mentions_timestamp; });
    if (fn.body_stats.reads_block_timestamp || timed_guard) {
      if (timed_guard && !facts.calls.empty()) {
        add(r, AuditCategory::TimestampDependence, Severity::Low, fn.line, fn.name,
            "Do not rely on block.timestamp precision to gate transfers");
      }
    }

    for (const auto& call : facts.calls) {
      if (call.kind == CallKind::LowLevel && !call.return_used) {
        add(r, AuditCategory::ExternalCallSafety, Severity::Medium, call.line, fn.name,
            "Check the return value of ." + call.member + "()");
      }
    }
  }

  std::stable_sort(r.findings.begin(), r.findings.end(), [](const AuditFinding& a, const AuditFinding& b) {
    return a.line.value_or(0) < b.line.value_or(0);
  });
  r.severity_level = max_finding_severity(r.findings);
  r.approved = r.severity_level <= Severity::Low;
  r.summary = r.findings.empty()
                  ? "No issues detected"
                  : std::to_string(r.findings.size()) + " finding(s), highest severity " +
                        std::string(to_string(r.severity_level));
  return r;
}

AuditReport parse_audit_json(std::string_view text) {
  const auto parsed = detail::find_json_object(text);
  if (!parsed) throw Error("audit response holds no JSON object");
  const auto& j = *parsed;
  detail::JsonReader<Error> reader(j, "audit");

  AuditReport r;
  r.source = AuditSource::Llm;
  r.summary = reader.string("summary");
  r.findings.clear();
  reader.objects("findings", [&](const detail::JsonReader<Error>& f) {
    const auto cat_text = f.string("category");
    const auto cat = parse_category(cat_text);
    if (!cat) {
      r.notes.push_back("finding with unknown category '" + cat_text + "' ignored");
      return;
    }
    AuditFinding finding;
    finding.category = *cat;
    const auto sev_text = f.string("severity");
    const auto sev = parse_severity(sev_text);
    if (!sev) r.notes.push_back("finding with unknown severity '" + sev_text + "' treated as medium");
    finding.severity = sev.value_or(Severity::Medium);
    if (const auto* line = f.find("line")) {
      if (line->is_number_integer()) {
        finding.line = line->get<int>();
      } else if (line->is_string()) {
        try {
          finding.line = std::stoi(line->get<std::string>());
        } catch (const std::exception&) {
        }
      }
      if (finding.line && *finding.line < 1) finding.line.reset();
    }
    finding.function = f.string("function");
    finding.remediation = f.string("remediation");
    if (finding.remediation.empty()) finding.remediation = f.string("description");
    r.findings.push_back(std::move(finding));
  });

  r.severity_level = max_finding_severity(r.findings);
  const auto declared_text = reader.string("severity_level");
  if (!declared_text.empty()) {
    const auto declared = parse_severity(declared_text);
    if (!declared || *declared != r.severity_level) {
      r.invariant_mismatch = true;
      r.notes.push_back("declared severity '" + declared_text + "' differs from findings (" +
                        std::string(to_string(r.severity_level)) + ")");
    }
  }
  const auto* approved = reader.find("approved");
  if (approved && approved->is_boolean()) {
    r.approved = approved->get<bool>();
  } else {
    r.approved = r.severity_level <= Severity::Low;
    r.notes.push_back("approved flag missing; derived from severity");
  }
  if (r.approved != (r.severity_level <= Severity::Low)) {
    r.invariant_mismatch = true;
    r.notes.push_back(std::string("approved=") + (r.approved ? "true" : "false") + " disagrees with severity " +
                      std::string(to_string(r.severity_level)));
  }
  return r;
}

const AuditReport& decisive_report(const AuditReport& llm, const AuditReport& heuristic) {
  return heuristic.severity_level > llm.severity_level ? heuristic : llm;
}

}  // namespace solbench
