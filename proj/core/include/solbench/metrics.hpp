#pragma once

#include <array>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "solbench/dataset.hpp"
#include "solbench/lint.hpp"
#include "solbench/schema.hpp"
#include "solbench/surface.hpp"

namespace solbench {

struct MetricScores {
  double m1_functional = 0;
  double m2_variable = 0;
  double m3_state_machine = 0;
  double m4_business_logic = 0;
  double m5_code_quality = 0;

  std::array<double, 5> as_array() const {
    return {m1_functional, m2_variable, m3_state_machine, m4_business_logic, m5_code_quality};
  }
  static MetricScores from_array(const std::array<double, 5>& a) {
    return {a[0], a[1], a[2], a[3], a[4]};
  }
  bool operator==(const MetricScores&) const = default;
};

inline constexpr std::array<std::string_view, 5> kMetricNames = {
    "Functional Completeness", "Variable Fidelity", "State Machine Correctness",
    "Business Logic Fidelity", "Code Quality"};

enum class Grade { A, B, C, D, F };

std::string_view to_string(Grade g);
std::optional<Grade> parse_grade(std::string_view s);

enum class MatchKind { Exact, Semantic, None };

std::string_view to_string(MatchKind k);

struct NameMatch {
  std::string expected;
  std::optional<std::string> matched;
  MatchKind kind = MatchKind::None;

  bool operator==(const NameMatch&) const = default;
};

struct Evidence {
  std::string criterion;
  std::vector<std::string> matched;
  std::vector<std::string> missed;
};

enum class ScoreSource { Deterministic, LlmJudge };

std::string_view to_string(ScoreSource s);

struct QualityReport {
  MetricScores scores;
  double composite = 0;
  Grade grade = Grade::F;
  std::array<std::vector<Evidence>, 5> evidence;
  ScoreSource source_of_scores = ScoreSource::Deterministic;
  /// Normalized sub-scores in [0,1], keyed `m1.names`, `q_impl.access`,
  /// `m3.transitions`, `m4.obligations`, ... Feeds error-mode classification.
  std::map<std::string, double> components;
  std::vector<std::string> notes;
};

/// Every rubric constant. Defaults reproduce the published weights and the
/// documented sub-score splits; `apply_metric_setting` overrides by key.
struct MetricConfig {
  std::array<double, 5> weights = {0.25, 0.15, 0.15, 0.35, 0.10};

  double exact_points = 10;
  double semantic_points = 7;
  double m1_name_points = 50;
  double q_impl_points = 50;

  double m2_name_points = 60;
  double m2_usage_points = 40;

  double m3_state_points = 40;
  double m3_transition_points = 30;
  double m3_guard_points = 30;

  double m4_obligation_points = 25;
  double m4_financial_points = 25;
  double m4_temporal_points = 25;
  double m4_conditional_points = 25;

  double m5_placeholder_penalty = 15;
  double m5_pattern_penalty = 10;
  double m5_missing_message_penalty = 10;
  double m5_no_events_penalty = 10;

  std::size_t semantic_min_token_length = 3;
  /// Word -> equivalent words, consulted by the semantic name rule.
  std::map<std::string, std::vector<std::string>> synonyms;

  /// Error-mode trigger: sub-score below this fraction of its cap.
  double error_mode_threshold = 0.5;
};

/// Applies one `key = value` setting (`weight.m1`, `m5.placeholder_penalty`,
/// `synonym.pay`, ...). Throws ConfigError for unknown keys or bad values.
void apply_metric_setting(MetricConfig& config, std::string_view key, std::string_view value);

/// Sorted `key = value` lines for every setting.
std::string describe_metric_config(const MetricConfig& config);

bool semantic_equivalent(std::string_view expected, std::string_view actual,
                         const MetricConfig& config = {});

/// One match per expected name: an exact pass, then a semantic pass, greedy
/// in expected order, each actual name consumed at most once.
std::vector<NameMatch> match_names(std::span<const std::string> expected,
                                   std::span<const std::string> actual,
                                   const MetricConfig& config = {});

/// (exact*E + semantic*S) / (expected*E) * cap; the cap when expected = 0.
double name_component(int expected, int exact, int semantic, const MetricConfig& config = {});

struct MetricResult {
  double score = 0;
  std::vector<Evidence> evidence;
  std::map<std::string, double> components;
};

struct QImplResult {
  double score = 0;
  double effect = 0;
  double access = 0;
  double events = 0;
  double validation = 0;
};

/// Average over `matched` of four equal sub-checks; 0 for an empty set.
QImplResult score_q_impl(const ContractSurface& surface,
                         std::span<const FunctionDecl* const> matched,
                         const ContractSchema& schema, const MetricConfig& config = {});

MetricResult score_m1_functional(const ContractSchema& schema, const ContractSurface& surface,
                                 const MetricConfig& config = {});
MetricResult score_m2_variables(const ContractSchema& schema, const ContractSurface& surface,
                                const MetricConfig& config = {});
MetricResult score_m3_state_machine(const ContractSchema& schema, const FsmSpec* fsm,
                                    const ContractSurface& surface,
                                    const MetricConfig& config = {});
MetricResult score_m4_business_logic(const ContractSchema& schema,
                                     const ContractSurface& surface, std::string_view source,
                                     const MetricConfig& config = {});
MetricResult score_m5_code_quality(const ContractSurface& surface,
                                   std::span<const LintFinding> lint,
                                   const MetricConfig& config = {});

Grade grade_for(double composite);

/// Weighted sum of the five metrics. Throws DomainError for any score outside
/// [0,100] (or NaN).
double composite(const MetricScores& scores, const MetricConfig& config = {});

/// Builds a report around externally supplied scores; the composite and
/// grade are always recomputed here.
QualityReport report_from_scores(const MetricScores& scores, ScoreSource source,
                                 const MetricConfig& config = {});

/// Full deterministic evaluation of one contract.
QualityReport evaluate_quality(const ContractSchema& schema, const FsmSpec* fsm,
                               const ContractSurface& surface, std::string_view source,
                               std::span<const LintFinding> lint,
                               const MetricConfig& config = {});

/// Report for a run that produced no contract: all zeros, grade F.
QualityReport empty_quality_report();

}  // namespace solbench
