#include "solbench/paired.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "json_util.hpp"
#include "solbench/error.hpp"
#include "solbench/text.hpp"

namespace solbench {

using detail::json;

namespace {

constexpr std::array<std::string_view, kErrorModeCount> kModeNames = {
    "LogicOmission", "StateTransitionError", "CompilationFailure", "IncompleteFinancialLogic",
    "AccessControlGap"};
constexpr std::array<std::string_view, kErrorModeCount> kModeLabels = {
    "Logic Omissions", "State Transition Errors", "Compilation Failures", "Incomplete Financial Logic",
    "Access Control Gaps"};
constexpr std::array<std::string_view, 5> kMetricKeys = {"m1_functional", "m2_variable", "m3_state_machine",
                                                         "m4_business_logic", "m5_code_quality"};
constexpr std::array<std::string_view, 3> kTierKeys = {"low", "medium", "high"};
constexpr std::array<std::string_view, 3> kTierLabels = {"Low (1-3 funcs, 1-2 states)",
                                                         "Medium (4-7 funcs, 3-4 states)",
                                                         "High (8+ funcs, 5+ states)"};

MetricDelta delta_of(double generated, double ground_truth) {
  MetricDelta d;
  d.absolute = generated - ground_truth;
  if (ground_truth != 0) d.percent = d.absolute / ground_truth * 100.0;
  return d;
}

Distribution distribution(const std::vector<double>& values) {
  Distribution d;
  if (values.empty()) return d;
  double sum = 0;
  for (double v : values) sum += v;
  d.mean = sum / static_cast<double>(values.size());
  double sq = 0;
  for (double v : values) sq += (v - d.mean) * (v - d.mean);
  d.stddev = std::sqrt(sq / static_cast<double>(values.size()));
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  d.min = *lo;
  d.max = *hi;
  return d;
}

double mean_of(double sum, std::size_t n) { return n == 0 ? 0.0 : sum / static_cast<double>(n); }

// ---- JSON form ----------------------------------------------------------

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

json distribution_json(const Distribution& d) {
  return {{"mean", d.mean}, {"stddev", d.stddev}, {"min", d.min}, {"max", d.max}};
}

json compile_json(const CompileStats& c) {
  return {{"total", c.total},     {"checked", c.checked},         {"success", c.success},
          {"failure", c.failure}, {"not_checked", c.not_checked}, {"rate", optional_number(c.rate)}};
}

json metric_array_json(const std::array<double, 5>& a) {
  json j = json::object();
  for (std::size_t i = 0; i < 5; ++i) j[std::string(kMetricKeys[i])] = a[i];
  return j;
}

json mode_counts_json(const std::array<std::size_t, 5>& a) {
  json j = json::object();
  for (std::size_t i = 0; i < a.size(); ++i) j[std::string(kModeNames[i])] = a[i];
  return j;
}

using Reader = detail::JsonReader<Error>;

const json& require(const json& node, std::string_view key, const std::string& path) {
  auto it = node.find(std::string(key));
  if (it == node.end()) throw Error(path + "." + std::string(key) + ": missing");
  return *it;
}

double number(const json& node, std::string_view key, const std::string& path) {
  const auto& v = require(node, key, path);
  if (!v.is_number()) throw Error(path + "." + std::string(key) + ": expected a number");
  return v.get<double>();
}

std::size_t count(const json& node, std::string_view key, const std::string& path) {
  const auto& v = require(node, key, path);
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0))
    throw Error(path + "." + std::string(key) + ": expected a count");
  return v.get<std::size_t>();
}

std::optional<double> maybe_number(const json& node, std::string_view key, const std::string& path) {
  const auto& v = require(node, key, path);
  if (v.is_null()) return std::nullopt;
  if (!v.is_number()) throw Error(path + "." + std::string(key) + ": expected a number or null");
  return v.get<double>();
}

Distribution distribution_from(const json& node, const std::string& path) {
  if (!node.is_object()) throw Error(path + ": expected an object");
  return {number(node, "mean", path), number(node, "stddev", path), number(node, "min", path),
          number(node, "max", path)};
}

CompileStats compile_from(const json& node, const std::string& path) {
  if (!node.is_object()) throw Error(path + ": expected an object");
  CompileStats c;
  c.total = static_cast<int>(count(node, "total", path));
  c.checked = static_cast<int>(count(node, "checked", path));
  c.success = static_cast<int>(count(node, "success", path));
  c.failure = static_cast<int>(count(node, "failure", path));
  c.not_checked = static_cast<int>(count(node, "not_checked", path));
  c.rate = maybe_number(node, "rate", path);
  return c;
}

std::array<double, 5> metric_array_from(const json& node, const std::string& path) {
  if (!node.is_object()) throw Error(path + ": expected an object");
  std::array<double, 5> a{};
  for (std::size_t i = 0; i < 5; ++i) a[i] = number(node, kMetricKeys[i], path);
  return a;
}

std::array<std::size_t, 5> mode_counts_from(const json& node, const std::string& path) {
  if (!node.is_object()) throw Error(path + ": expected an object");
  std::array<std::size_t, 5> a{};
  for (std::size_t i = 0; i < a.size(); ++i) a[i] = count(node, kModeNames[i], path);
  return a;
}

// ---- Markdown form ------------------------------------------------------

std::string f2(double v) { return text::fixed(v, 2); }
std::string pct(std::optional<double> fraction) {
  return fraction ? text::fixed(*fraction * 100.0, 2) + "%" : "n/a";
}
std::string signed2(double v) { return (v >= 0 ? "+" : "") + text::fixed(v, 2); }
std::string share(std::size_t part, std::size_t whole) {
  return whole == 0 ? "n/a" : text::fixed(100.0 * static_cast<double>(part) / static_cast<double>(whole), 2) + "%";
}

}  // namespace

PairedResult compare_reports(QualityReport generated, QualityReport ground_truth) {
  PairedResult r;
  const auto g = generated.scores.as_array();
  const auto t = ground_truth.scores.as_array();
  for (std::size_t i = 0; i < 5; ++i) r.deltas[i] = delta_of(g[i], t[i]);
  r.composite_delta = generated.composite - ground_truth.composite;
  r.generated = std::move(generated);
  r.ground_truth = std::move(ground_truth);
  return r;
}

PairedResult compare_pair(const ContractSchema& schema, const FsmSpec* fsm, const ContractSurface& generated,
                          std::string_view generated_source, const ContractSurface& ground_truth,
                          std::string_view ground_truth_source, std::span<const LintFinding> lint_generated,
                          std::span<const LintFinding> lint_ground_truth, const MetricConfig& config) {
  return compare_reports(evaluate_quality(schema, fsm, generated, generated_source, lint_generated, config),
                         evaluate_quality(schema, fsm, ground_truth, ground_truth_source, lint_ground_truth, config));
}

std::string_view to_string(ErrorMode m) { return kModeNames[static_cast<std::size_t>(m)]; }

std::optional<ErrorMode> parse_error_mode(std::string_view s) {
  const auto folded = text::fold_identifier(text::trim(s));
  for (std::size_t i = 0; i < kModeNames.size(); ++i)
    if (text::to_lower(kModeNames[i]) == folded) return static_cast<ErrorMode>(i);
  return std::nullopt;
}

std::optional<ErrorModeResult> classify_error_modes(const QualityReport& report, const CompileResult& compile,
                                                    const MetricConfig& config) {
  if (report.grade == Grade::A || report.grade == Grade::B) return std::nullopt;
  ErrorModeResult out;
  std::optional<double> worst;
  auto consider = [&](ErrorMode mode, std::optional<double> value) {
    if (!value || *value >= config.error_mode_threshold) return;
    out.modes.push_back(mode);
    // Strictly lower wins, so ties keep the taxonomy order.
    if (!worst || *value < *worst) {
      worst = value;
      out.primary = mode;
    }
  };
  auto component = [&](const char* key) -> std::optional<double> {
    auto it = report.components.find(key);
    if (it == report.components.end()) return std::nullopt;
    return it->second;
  };
  consider(ErrorMode::LogicOmission, component("m4.obligations"));
  consider(ErrorMode::StateTransitionError, component("m3.transitions"));
  consider(ErrorMode::CompilationFailure,
           compile.status == CompileStatus::Failure ? std::optional<double>(0.0) : std::nullopt);
  consider(ErrorMode::IncompleteFinancialLogic, component("m4.financial"));
  consider(ErrorMode::AccessControlGap, component("q_impl.access"));
  return out;
}

BatchSummary summarize(std::span<const RecordStats> records, std::size_t line_errors, const MetricConfig& config) {
  std::vector<const RecordStats*> sorted;
  sorted.reserve(records.size());
  for (const auto& r : records) sorted.push_back(&r);
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const RecordStats* a, const RecordStats* b) { return a->entry_id < b->entry_id; });

  BatchSummary s;
  s.weights = config.weights;
  s.n = sorted.size();
  s.line_errors = line_errors;

  std::vector<double> composites;
  std::array<double, 5> metric_sums{};
  double seconds = 0;
  std::vector<CompileResult> compiles;
  std::array<std::vector<double>, 3> tier_scores;
  std::array<std::vector<CompileResult>, 3> tier_compiles;
  std::vector<double> gt_gen, gt_truth;
  std::array<double, 5> gen_sums{}, truth_sums{};
  std::size_t negative = 0;
  double findings_before = 0, findings_after = 0;
  std::vector<CompileResult> before, after;

  for (const RecordStats* r : sorted) {
    if (r->failed) ++s.failed;
    composites.push_back(r->composite);
    const auto m = r->scores.as_array();
    for (std::size_t i = 0; i < 5; ++i) metric_sums[i] += m[i];
    seconds += r->processing_seconds;
    ++s.grade_histogram[static_cast<std::size_t>(r->grade)];
    CompileResult c;
    c.status = r->compile;
    compiles.push_back(c);
    if (r->tier) {
      const auto t = static_cast<std::size_t>(*r->tier);
      tier_scores[t].push_back(r->composite);
      tier_compiles[t].push_back(c);
    }
    if (r->grade == Grade::C || r->grade == Grade::D || r->grade == Grade::F) {
      ++s.error_mode_population;
      if (r->primary_error_mode) ++s.error_mode_primary[static_cast<std::size_t>(*r->primary_error_mode)];
      for (auto mode : r->error_modes) ++s.error_mode_mentions[static_cast<std::size_t>(mode)];
    }
    if (r->gt_scores && r->gt_composite) {
      gt_gen.push_back(r->composite);
      gt_truth.push_back(*r->gt_composite);
      const auto g = r->gt_scores->as_array();
      for (std::size_t i = 0; i < 5; ++i) {
        gen_sums[i] += m[i];
        truth_sums[i] += g[i];
      }
      if (r->composite - *r->gt_composite < 0) ++negative;
    }
    if (r->audited) {
      auto& row = s.refinement;
      ++row.audited;
      if (r->refinements > 0) ++row.refined;
      if (r->initial_severity >= Severity::Medium) ++row.medium_plus_before;
      if (r->final_severity >= Severity::Medium) ++row.medium_plus_after;
      findings_before += r->initial_findings;
      findings_after += r->final_findings;
      row.critical_before += static_cast<std::size_t>(r->initial_critical);
      row.critical_after += static_cast<std::size_t>(r->final_critical);
      CompileResult b;
      b.status = r->initial_compile;
      before.push_back(b);
      after.push_back(c);
    }
  }

  if (!composites.empty()) s.composite = distribution(composites);
  for (std::size_t i = 0; i < 5; ++i) s.metric_means[i] = mean_of(metric_sums[i], s.n);
  s.mean_processing_seconds = mean_of(seconds, s.n);
  s.total_processing_hours = seconds / 3600.0;
  s.compile = compile_rate(compiles);
  for (std::size_t t = 0; t < 3; ++t) {
    auto& row = s.tiers[t];
    row.n = tier_scores[t].size();
    if (row.n > 0) row.mean_composite = distribution(tier_scores[t]).mean;
    row.compile = compile_rate(tier_compiles[t]);
  }
  if (!gt_gen.empty()) {
    GtComparison g;
    g.n = gt_gen.size();
    g.generated = distribution(gt_gen);
    g.ground_truth = distribution(gt_truth);
    g.mean_delta = g.generated.mean - g.ground_truth.mean;
    for (std::size_t i = 0; i < 5; ++i) {
      g.generated_means[i] = mean_of(gen_sums[i], g.n);
      g.ground_truth_means[i] = mean_of(truth_sums[i], g.n);
      g.deltas[i] = delta_of(g.generated_means[i], g.ground_truth_means[i]);
    }
    g.negative_deltas = negative;
    s.gt = g;
  }
  s.refinement.issues_per_contract_before = mean_of(findings_before, s.refinement.audited);
  s.refinement.issues_per_contract_after = mean_of(findings_after, s.refinement.audited);
  s.refinement.compile_before = compile_rate(before);
  s.refinement.compile_after = compile_rate(after);
  return s;
}

std::string render_report(const BatchSummary& s, ReportFormat format) {
  if (format == ReportFormat::Json) {
    json j = json::object();
    j["n"] = s.n;
    j["failed"] = s.failed;
    j["line_errors"] = s.line_errors;
    j["composite"] = s.composite ? distribution_json(*s.composite) : json(nullptr);
    j["metric_means"] = metric_array_json(s.metric_means);
    j["weights"] = metric_array_json(s.weights);
    j["mean_processing_seconds"] = s.mean_processing_seconds;
    j["total_processing_hours"] = s.total_processing_hours;
    json grades = json::object();
    for (std::size_t g = 0; g < 5; ++g) grades[std::string(to_string(static_cast<Grade>(g)))] = s.grade_histogram[g];
    j["grades"] = grades;
    j["compile"] = compile_json(s.compile);
    json tiers = json::object();
    for (std::size_t t = 0; t < 3; ++t) {
      tiers[std::string(kTierKeys[t])] = {{"n", s.tiers[t].n},
                                          {"mean_composite", optional_number(s.tiers[t].mean_composite)},
                                          {"compile", compile_json(s.tiers[t].compile)}};
    }
    j["tiers"] = tiers;
    j["error_modes"] = {{"population", s.error_mode_population},
                        {"primary", mode_counts_json(s.error_mode_primary)},
                        {"mentions", mode_counts_json(s.error_mode_mentions)}};
    if (s.gt) {
      const auto& g = *s.gt;
      json deltas = json::object();
      for (std::size_t i = 0; i < 5; ++i) {
        deltas[std::string(kMetricKeys[i])] = {{"absolute", g.deltas[i].absolute},
                                               {"percent", optional_number(g.deltas[i].percent)}};
      }
      j["ground_truth"] = {{"n", g.n},
                           {"generated", distribution_json(g.generated)},
                           {"ground_truth", distribution_json(g.ground_truth)},
                           {"mean_delta", g.mean_delta},
                           {"generated_means", metric_array_json(g.generated_means)},
                           {"ground_truth_means", metric_array_json(g.ground_truth_means)},
                           {"deltas", deltas},
                           {"negative_deltas", g.negative_deltas}};
    } else {
      j["ground_truth"] = nullptr;
    }
    const auto& r = s.refinement;
    j["refinement"] = {{"audited", r.audited},
                       {"refined", r.refined},
                       {"medium_plus_before", r.medium_plus_before},
                       {"medium_plus_after", r.medium_plus_after},
                       {"issues_per_contract_before", r.issues_per_contract_before},
                       {"issues_per_contract_after", r.issues_per_contract_after},
                       {"critical_before", r.critical_before},
                       {"critical_after", r.critical_after},
                       {"compile_before", compile_json(r.compile_before)},
                       {"compile_after", compile_json(r.compile_after)}};
    return j.dump(2) + "\n";
  }

  std::ostringstream md;
  md << "# Evaluation summary\n\n";
  md << "Entries: " << s.n << " (failed: " << s.failed << ", unreadable lines: " << s.line_errors << ")\n\n";

  md << "## Overall performance\n\n";
  if (!s.composite) {
    md << "No data.\n\n";
  } else {
    md << "| Metric | Value |\n|---|---:|\n";
    md << "| Average Composite Score | " << f2(s.composite->mean) << " |\n";
    md << "| Minimum Score | " << f2(s.composite->min) << " |\n";
    md << "| Maximum Score | " << f2(s.composite->max) << " |\n";
    md << "| Standard Deviation | " << f2(s.composite->stddev) << " |\n";
    md << "| Average Processing Time (s) | " << f2(s.mean_processing_seconds) << " |\n";
    md << "| Total Evaluation Time (h) | " << f2(s.total_processing_hours) << " |\n\n";
  }

  md << "## Grade distribution\n\n";
  if (s.n == 0) {
    md << "No data.\n\n";
  } else {
    md << "| Grade | Count | Share |\n|---|---:|---:|\n";
    for (std::size_t g = 0; g < 5; ++g) {
      md << "| " << to_string(static_cast<Grade>(g)) << " | " << s.grade_histogram[g] << " | "
         << share(s.grade_histogram[g], s.n) << " |\n";
    }
    md << "\n";
  }

  md << "## Metric averages\n\n";
  if (s.n == 0) {
    md << "No data.\n\n";
  } else {
    md << "| Metric | Weight | Avg Score | Contribution |\n|---|---:|---:|---:|\n";
    double total = 0;
    for (std::size_t i = 0; i < 5; ++i) {
      const double contribution = s.weights[i] * s.metric_means[i];
      total += contribution;
      md << "| " << kMetricNames[i] << " | " << text::fixed(s.weights[i] * 100.0, 0) << "% | "
         << f2(s.metric_means[i]) << " | " << f2(contribution) << " |\n";
    }
    md << "| Composite Score | 100% | - | " << f2(total) << " |\n\n";
  }

  md << "## Compilation\n\n";
  md << "| Statistic | Value |\n|---|---:|\n";
  md << "| Total Contracts Checked | " << s.compile.checked << " |\n";
  md << "| Successful Compilations | " << s.compile.success << " |\n";
  md << "| Failed Compilations | " << s.compile.failure << " |\n";
  md << "| Not Checked | " << s.compile.not_checked << " |\n";
  md << "| Success Rate | " << pct(s.compile.rate) << " |\n\n";

  md << "## Generated vs ground truth\n\n";
  if (!s.gt) {
    md << "No data.\n\n";
  } else {
    const auto& g = *s.gt;
    md << "Pairs: " << g.n << "\n\n";
    md << "| Metric | Generated | Ground Truth |\n|---|---:|---:|\n";
    md << "| Avg Composite Score | " << f2(g.generated.mean) << " | " << f2(g.ground_truth.mean) << " ("
       << signed2(g.mean_delta) << ") |\n";
    md << "| Std Deviation | " << f2(g.generated.stddev) << " | " << f2(g.ground_truth.stddev) << " |\n";
    md << "| Min Score | " << f2(g.generated.min) << " | " << f2(g.ground_truth.min) << " |\n";
    md << "| Max Score | " << f2(g.generated.max) << " | " << f2(g.ground_truth.max) << " |\n\n";
    md << "| Metric | Gen. | GT | Delta | Delta % |\n|---|---:|---:|---:|---:|\n";
    for (std::size_t i = 0; i < 5; ++i) {
      md << "| " << kMetricNames[i] << " | " << f2(g.generated_means[i]) << " | " << f2(g.ground_truth_means[i])
         << " | " << signed2(g.deltas[i].absolute) << " | "
         << (g.deltas[i].percent ? signed2(*g.deltas[i].percent) + "%" : "n/a") << " |\n";
    }
    md << "\nPairs where generated scored below ground truth: " << g.negative_deltas << " ("
       << share(g.negative_deltas, g.n) << ")\n\n";
  }

  md << "## Error modes (C/D/F grades)\n\n";
  if (s.error_mode_population == 0) {
    md << "No data.\n\n";
  } else {
    std::size_t classified = 0;
    for (auto c : s.error_mode_primary) classified += c;
    md << "Population: " << s.error_mode_population << "\n\n";
    md << "| Error Mode | Count | % | Mentions |\n|---|---:|---:|---:|\n";
    for (std::size_t i = 0; i < kModeLabels.size(); ++i) {
      md << "| " << kModeLabels[i] << " | " << s.error_mode_primary[i] << " | "
         << share(s.error_mode_primary[i], classified) << " | " << s.error_mode_mentions[i] << " |\n";
    }
    md << "\n";
  }

  md << "## Performance by specification complexity\n\n";
  md << "| Complexity | N | Avg Score | Comp. Rate |\n|---|---:|---:|---:|\n";
  for (std::size_t t = 0; t < 3; ++t) {
    const auto& row = s.tiers[t];
    md << "| " << kTierLabels[t] << " | " << row.n << " | "
       << (row.mean_composite ? text::fixed(*row.mean_composite, 2) : "n/a") << " | " << pct(row.compile.rate)
       << " |\n";
  }
  md << "\n";

  md << "## Refinement loop\n\n";
  const auto& r = s.refinement;
  if (r.audited == 0) {
    md << "No data.\n\n";
  } else {
    md << "Audited: " << r.audited << ", refined: " << r.refined << "\n\n";
    md << "| Metric | Before | After |\n|---|---:|---:|\n";
    md << "| Contracts w/ Med+ Severity | " << r.medium_plus_before << " | " << r.medium_plus_after << " |\n";
    md << "| Avg Security Issues/Contract | " << f2(r.issues_per_contract_before) << " | "
       << f2(r.issues_per_contract_after) << " |\n";
    md << "| Critical Vulnerabilities | " << r.critical_before << " | " << r.critical_after << " |\n";
    md << "| Compilation Success Rate | " << pct(r.compile_before.rate) << " | " << pct(r.compile_after.rate)
       << " |\n\n";
  }
  md << "Standard deviations are population standard deviations.\n";
  return md.str();
}

BatchSummary summary_from_json(std::string_view text) {
  const auto parsed = detail::try_parse(text);
  if (!parsed || !parsed->is_object()) throw Error("summary JSON must be an object");
  const json& j = *parsed;
  const std::string root = "summary";
  BatchSummary s;
  s.n = count(j, "n", root);
  s.failed = count(j, "failed", root);
  s.line_errors = count(j, "line_errors", root);
  if (const auto& c = require(j, "composite", root); !c.is_null()) s.composite = distribution_from(c, root + ".composite");
  s.metric_means = metric_array_from(require(j, "metric_means", root), root + ".metric_means");
  s.weights = metric_array_from(require(j, "weights", root), root + ".weights");
  s.mean_processing_seconds = number(j, "mean_processing_seconds", root);
  s.total_processing_hours = number(j, "total_processing_hours", root);
  const auto& grades = require(j, "grades", root);
  for (std::size_t g = 0; g < 5; ++g)
    s.grade_histogram[g] = count(grades, to_string(static_cast<Grade>(g)), root + ".grades");
  s.compile = compile_from(require(j, "compile", root), root + ".compile");
  const auto& tiers = require(j, "tiers", root);
  for (std::size_t t = 0; t < 3; ++t) {
    const std::string path = root + ".tiers." + std::string(kTierKeys[t]);
    const auto& row = require(tiers, kTierKeys[t], root + ".tiers");
    s.tiers[t].n = count(row, "n", path);
    s.tiers[t].mean_composite = maybe_number(row, "mean_composite", path);
    s.tiers[t].compile = compile_from(require(row, "compile", path), path + ".compile");
  }
  const auto& modes = require(j, "error_modes", root);
  s.error_mode_population = count(modes, "population", root + ".error_modes");
  s.error_mode_primary = mode_counts_from(require(modes, "primary", root), root + ".error_modes.primary");
  s.error_mode_mentions = mode_counts_from(require(modes, "mentions", root), root + ".error_modes.mentions");
  if (const auto& gt = require(j, "ground_truth", root); !gt.is_null()) {
    const std::string path = root + ".ground_truth";
    GtComparison g;
    g.n = count(gt, "n", path);
    g.generated = distribution_from(require(gt, "generated", path), path + ".generated");
    g.ground_truth = distribution_from(require(gt, "ground_truth", path), path + ".ground_truth");
    g.mean_delta = number(gt, "mean_delta", path);
    g.generated_means = metric_array_from(require(gt, "generated_means", path), path + ".generated_means");
    g.ground_truth_means = metric_array_from(require(gt, "ground_truth_means", path), path + ".ground_truth_means");
    const auto& deltas = require(gt, "deltas", path);
    for (std::size_t i = 0; i < 5; ++i) {
      const auto& d = require(deltas, kMetricKeys[i], path + ".deltas");
      g.deltas[i].absolute = number(d, "absolute", path + ".deltas");
      g.deltas[i].percent = maybe_number(d, "percent", path + ".deltas");
    }
    g.negative_deltas = count(gt, "negative_deltas", path);
    s.gt = g;
  }
  const auto& r = require(j, "refinement", root);
  const std::string path = root + ".refinement";
  s.refinement.audited = count(r, "audited", path);
  s.refinement.refined = count(r, "refined", path);
  s.refinement.medium_plus_before = count(r, "medium_plus_before", path);
  s.refinement.medium_plus_after = count(r, "medium_plus_after", path);
  s.refinement.issues_per_contract_before = number(r, "issues_per_contract_before", path);
  s.refinement.issues_per_contract_after = number(r, "issues_per_contract_after", path);
  s.refinement.critical_before = count(r, "critical_before", path);
  s.refinement.critical_after = count(r, "critical_after", path);
  s.refinement.compile_before = compile_from(require(r, "compile_before", path), path + ".compile_before");
  s.refinement.compile_after = compile_from(require(r, "compile_after", path), path + ".compile_after");
  return s;
}

}  // namespace solbench
