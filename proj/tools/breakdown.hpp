#pragma once

#include <ostream>
#include <span>

#include "solbench/pipeline.hpp"

namespace solbench::cli {

void print_quality(std::ostream& out, const QualityReport& report);
void print_comparison(std::ostream& out, const PairedResult& result);
void print_lint(std::ostream& out, std::span<const LintFinding> lint);
void print_audit(std::ostream& out, const AuditReport& report);
void print_compile(std::ostream& out, const CompileResult& result);
void print_event(std::ostream& out, const std::string& entry_id, const PipelineEvent& event);

/// Everything a finished single run produced, for people.
void print_record(std::ostream& out, const PipelineRecord& record);

}  // namespace solbench::cli
