#include "breakdown.hpp"

#include <string>

#include "solbench/text.hpp"

namespace solbench::cli {

namespace {

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (const auto& s : items) out += (out.empty() ? "" : ", ") + s;
  return out;
}

}  // namespace

void print_quality(std::ostream& out, const QualityReport& r) {
  const auto scores = r.scores.as_array();
  out << "Quality (" << to_string(r.source_of_scores) << ")\n";
  for (std::size_t m = 0; m < scores.size(); ++m) {
    out << "  M" << m + 1 << " " << kMetricNames[m] << ": " << text::fixed(scores[m], 2) << "\n";
    for (const auto& ev : r.evidence[m]) {
      if (!ev.matched.empty()) out << "      + " << ev.criterion << ": " << join(ev.matched) << "\n";
      if (!ev.missed.empty()) out << "      - " << ev.criterion << " missing: " << join(ev.missed) << "\n";
    }
  }
  out << "  Composite: " << text::fixed(r.composite, 2) << " (Grade: " << to_string(r.grade) << ")\n";
  for (const auto& n : r.notes) out << "  note: " << n << "\n";
}

void print_comparison(std::ostream& out, const PairedResult& p) {
  const auto gen = p.generated.scores.as_array();
  const auto gt = p.ground_truth.scores.as_array();
  out << "Generated vs ground truth\n";
  for (std::size_t m = 0; m < gen.size(); ++m) {
    const auto& d = p.deltas[m];
    out << "  " << kMetricNames[m] << ": " << text::fixed(gen[m], 2) << " vs " << text::fixed(gt[m], 2) << " ("
        << (d.absolute >= 0 ? "+" : "") << text::fixed(d.absolute, 2);
    if (d.percent) out << ", " << (*d.percent >= 0 ? "+" : "") << text::fixed(*d.percent, 1) << "%";
    out << ")\n";
  }
  out << "  Composite: " << text::fixed(p.generated.composite, 2) << " vs " << text::fixed(p.ground_truth.composite, 2)
      << " (" << (p.composite_delta >= 0 ? "+" : "") << text::fixed(p.composite_delta, 2) << ")\n";
}

void print_lint(std::ostream& out, std::span<const LintFinding> lint) {
  out << "Forbidden patterns: " << (lint.empty() ? "none" : std::to_string(lint.size())) << "\n";
  for (const auto& f : lint) out << "  line " << f.location << ": " << to_string(f.pattern) << ": " << f.detail << "\n";
}

void print_audit(std::ostream& out, const AuditReport& a) {
  out << "Audit (" << to_string(a.source) << "): " << to_string(a.severity_level)
      << (a.approved ? ", approved" : ", not approved") << "\n";
  for (const auto& f : a.findings) {
    out << "  [" << to_string(f.severity) << "] " << to_string(f.category);
    if (f.line) out << " line " << *f.line;
    if (!f.function.empty()) out << " in " << f.function;
    out << ": " << f.remediation << "\n";
  }
  for (const auto& n : a.notes) out << "  note: " << n << "\n";
}

void print_compile(std::ostream& out, const CompileResult& c) {
  out << "Compile: " << to_string(c.status);
  if (!c.compiler_version.empty()) out << " with solc " << c.compiler_version;
  if (!c.reason.empty()) out << " (" << c.reason << ")";
  out << "\n";
  for (const auto& d : c.diagnostics) {
    out << "  " << d.severity;
    if (d.line) out << " line " << *d.line;
    out << ": " << d.message << "\n";
  }
}

void print_event(std::ostream& out, const std::string& entry_id, const PipelineEvent& e) {
  out << "[" << entry_id << "] " << e.timestamp_ms << " " << e.phase << " " << to_string(e.kind);
  if (!e.detail.empty()) out << ": " << e.detail;
  out << "\n";
}

void print_record(std::ostream& out, const PipelineRecord& r) {
  out << "\nEntry " << r.entry_id << (r.failed ? " (FAILED)" : "") << "\n";
  if (r.complexity) {
    out << "Complexity: " << to_string(r.complexity->tier) << " (" << r.complexity->function_count << " functions, "
        << r.complexity->state_count << " states)\n";
  }
  out << "Refinements: " << r.refinements << "\n";
  if (!r.audit_trail.empty()) print_audit(out, r.audit_trail.back());
  print_compile(out, r.compile);
  print_lint(out, r.lint);
  print_quality(out, r.quality);
  if (r.comparison) print_comparison(out, *r.comparison);
  if (r.error_modes && !r.error_modes->modes.empty()) {
    out << "Error modes:";
    for (auto m : r.error_modes->modes) out << " " << to_string(m) << (r.error_modes->primary == m ? "*" : "");
    out << "\n";
  }
  for (const auto& n : r.notes) out << "note: " << n << "\n";
}

}  // namespace solbench::cli
