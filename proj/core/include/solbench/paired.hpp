#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "solbench/audit.hpp"
#include "solbench/compile.hpp"
#include "solbench/dataset.hpp"
#include "solbench/metrics.hpp"

namespace solbench {

struct MetricDelta {
  double absolute = 0;
  /// Percent of the ground-truth value; absent when that value is 0.
  std::optional<double> percent;
};

struct PairedResult {
  QualityReport generated;
  QualityReport ground_truth;
  std::array<MetricDelta, 5> deltas;
  double composite_delta = 0;
};

/// Deltas between two already-scored reports (generated minus ground truth).
PairedResult compare_reports(QualityReport generated, QualityReport ground_truth);

/// Scores both contracts with the same configuration and compares them.
PairedResult compare_pair(const ContractSchema& schema, const FsmSpec* fsm,
                          const ContractSurface& generated, std::string_view generated_source,
                          const ContractSurface& ground_truth, std::string_view ground_truth_source,
                          std::span<const LintFinding> lint_generated,
                          std::span<const LintFinding> lint_ground_truth,
                          const MetricConfig& config = {});

enum class ErrorMode {
  LogicOmission,
  StateTransitionError,
  CompilationFailure,
  IncompleteFinancialLogic,
  AccessControlGap,
};

inline constexpr int kErrorModeCount = 5;

std::string_view to_string(ErrorMode m);
std::optional<ErrorMode> parse_error_mode(std::string_view s);

struct ErrorModeResult {
  std::vector<ErrorMode> modes;
  /// Mode with the lowest sub-score.
  std::optional<ErrorMode> primary;
};

/// Only C/D/F reports are classified; A and B return nullopt.
std::optional<ErrorModeResult> classify_error_modes(const QualityReport& report,
                                                    const CompileResult& compile,
                                                    const MetricConfig& config = {});

/// The per-record numbers a batch summary needs.
struct RecordStats {
  std::string entry_id;
  bool failed = false;
  double processing_seconds = 0;
  MetricScores scores;
  double composite = 0;
  Grade grade = Grade::F;
  CompileStatus compile = CompileStatus::NotChecked;
  CompileStatus initial_compile = CompileStatus::NotChecked;
  std::optional<Tier> tier;
  std::vector<ErrorMode> error_modes;
  std::optional<ErrorMode> primary_error_mode;
  std::optional<MetricScores> gt_scores;
  std::optional<double> gt_composite;
  int refinements = 0;
  Severity initial_severity = Severity::None;
  Severity final_severity = Severity::None;
  int initial_findings = 0;
  int final_findings = 0;
  int initial_critical = 0;
  int final_critical = 0;
  bool audited = false;
};

struct Distribution {
  double mean = 0;
  /// Population standard deviation.
  double stddev = 0;
  double min = 0;
  double max = 0;
};

struct TierRow {
  std::size_t n = 0;
  std::optional<double> mean_composite;
  CompileStats compile;
};

struct GtComparison {
  std::size_t n = 0;
  Distribution generated;
  Distribution ground_truth;
  double mean_delta = 0;
  std::array<double, 5> generated_means{};
  std::array<double, 5> ground_truth_means{};
  std::array<MetricDelta, 5> deltas{};
  std::size_t negative_deltas = 0;
};

struct RefinementRow {
  std::size_t audited = 0;
  std::size_t refined = 0;
  std::size_t medium_plus_before = 0;
  std::size_t medium_plus_after = 0;
  double issues_per_contract_before = 0;
  double issues_per_contract_after = 0;
  std::size_t critical_before = 0;
  std::size_t critical_after = 0;
  CompileStats compile_before;
  CompileStats compile_after;
};

struct BatchSummary {
  std::size_t n = 0;
  std::size_t failed = 0;
  std::size_t line_errors = 0;
  std::optional<Distribution> composite;
  std::array<double, 5> metric_means{};
  double mean_processing_seconds = 0;
  double total_processing_hours = 0;
  /// Indexed by Grade.
  std::array<std::size_t, 5> grade_histogram{};
  CompileStats compile;
  /// Indexed by Tier.
  std::array<TierRow, 3> tiers{};
  /// Records graded C/D/F.
  std::size_t error_mode_population = 0;
  /// Primary mode per classified record, indexed by ErrorMode.
  std::array<std::size_t, 5> error_mode_primary{};
  /// Every mode assigned (a record may count several times).
  std::array<std::size_t, 5> error_mode_mentions{};
  std::optional<GtComparison> gt;
  RefinementRow refinement;
  /// Metric weights used for the contribution column.
  std::array<double, 5> weights = MetricConfig{}.weights;
};

/// Aggregates in one pass over the records sorted by id, so the result does
/// not depend on input order.
BatchSummary summarize(std::span<const RecordStats> records, std::size_t line_errors = 0,
                       const MetricConfig& config = {});

enum class ReportFormat { Json, Markdown };

/// Byte-stable rendering. Markdown mirrors the published table layouts with
/// two decimals; JSON keeps full precision.
std::string render_report(const BatchSummary& summary, ReportFormat format);

/// Inverse of the JSON rendering. Throws Error on malformed input.
BatchSummary summary_from_json(std::string_view text);

}  // namespace solbench
