#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "solbench/error.hpp"
#include "solbench/metrics.hpp"

using namespace solbench;

namespace {

double weighted(const MetricScores& s) {
  return 0.25 * s.m1_functional + 0.15 * s.m2_variable + 0.15 * s.m3_state_machine + 0.35 * s.m4_business_logic +
         0.10 * s.m5_code_quality;
}

struct Parsed {
  std::string source;
  ContractSurface surface;
};

Parsed parse(std::string source) {
  auto surface = parse_surface(source).surface;
  return {std::move(source), std::move(surface)};
}

ContractSchema staking_schema() { return schema_from_json(testing::read_fixture("staking/schema.json")); }

}  // namespace

TEST_CASE("composite reproduces the published recombinations") {
  const double table3 = composite({84.45, 84.62, 83.12, 76.73, 83.85});
  CHECK(std::abs(table3 - 81.514) < 1e-9);
  CHECK(std::abs(table3 - 81.51) <= 0.02);
  const double listing = composite({92, 85, 90, 86, 80});
  CHECK(std::abs(listing - 87.35) < 1e-9);
  CHECK(std::abs(listing - 87.3) <= 0.05 + 1e-9);
  CHECK(grade_for(listing) == Grade::B);
  CHECK(composite({100, 100, 100, 100, 100}) == doctest::Approx(100));
  CHECK(grade_for(100) == Grade::A);
  CHECK(composite({0, 0, 0, 0, 0}) == 0);
  CHECK(grade_for(0) == Grade::F);
}

TEST_CASE("grade bands are half-open") {
  CHECK(grade_for(90.0) == Grade::A);
  CHECK(grade_for(89.999) == Grade::B);
  CHECK(grade_for(80.0) == Grade::B);
  CHECK(grade_for(79.999) == Grade::C);
  CHECK(grade_for(70.0) == Grade::C);
  CHECK(grade_for(60.0) == Grade::D);
  CHECK(grade_for(59.999) == Grade::F);
  CHECK(parse_grade("B") == Grade::B);
  CHECK_FALSE(parse_grade("E"));
}

TEST_CASE("composite rejects out-of-domain scores") {
  CHECK_THROWS_AS(composite({101, 0, 0, 0, 0}), DomainError);
  CHECK_THROWS_AS(composite({0, -0.1, 0, 0, 0}), DomainError);
  CHECK_THROWS_AS(composite({0, 0, std::nan(""), 0, 0}), DomainError);
  CHECK_THROWS_AS(report_from_scores({0, 0, 0, 0, 200}, ScoreSource::LlmJudge), DomainError);
}

TEST_CASE("composite properties over random tuples") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> score(0, 100);
  for (int i = 0; i < 10000; ++i) {
    MetricScores s{score(rng), score(rng), score(rng), score(rng), score(rng)};
    const double c = composite(s);
    CHECK(c >= 0);
    CHECK(c <= 100 + 1e-9);
    CHECK(std::abs(c - weighted(s)) < 1e-9);
    // monotone in every coordinate
    auto a = s.as_array();
    const auto k = rng() % 5;
    a[k] = std::min(100.0, a[k] + score(rng) / 10);
    CHECK(composite(MetricScores::from_array(a)) >= c - 1e-12);
    const double flat = score(rng);
    CHECK(std::abs(composite({flat, flat, flat, flat, flat}) - flat) < 1e-9);
  }
}

TEST_CASE("name component properties") {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 10000; ++i) {
    const int expected = static_cast<int>(rng() % 12);
    const int exact = expected ? static_cast<int>(rng() % (expected + 1)) : 0;
    const int semantic = expected - exact ? static_cast<int>(rng() % (expected - exact + 1)) : 0;
    const double v = name_component(expected, exact, semantic);
    CHECK(v >= 0);
    CHECK(v <= 50);
    if (expected == 0) {
      CHECK(v == 50);
    } else {
      CHECK(std::abs(v - (10.0 * exact + 7.0 * semantic) / (expected * 10.0) * 50) < 1e-9);
      if (semantic > 0) CHECK(name_component(expected, exact + 1, semantic - 1) > v);
    }
  }
  CHECK(name_component(5, 3, 1) + 40 == doctest::Approx(77));
  CHECK(name_component(4, 4, 0) == 50);
}

TEST_CASE("name matching") {
  using V = std::vector<std::string>;
  const V expected = {"stake", "withdraw"};
  const V actual = {"stake", "withdraw", "claim"};
  for (const auto& m : match_names(expected, actual)) CHECK(m.kind == MatchKind::Exact);

  const auto semantic = match_names(V{"payRent"}, V{"pay_rent"});
  CHECK(semantic[0].kind == MatchKind::Semantic);
  CHECK(semantic[0].matched == "pay_rent");
  CHECK(match_names(V{"confirmDelivery"}, V{"transfer"})[0].kind == MatchKind::None);

  // each actual name is consumed once, exact pass first
  const auto greedy = match_names(V{"payRentLate", "payRent"}, V{"payRent"});
  CHECK(greedy[0].kind == MatchKind::None);
  CHECK(greedy[1].kind == MatchKind::Exact);

  CHECK(semantic_equivalent("releaseFunds", "release"));
  CHECK_FALSE(semantic_equivalent("ab", "abc"));
  MetricConfig cfg;
  cfg.synonyms["pay"] = {"settle"};
  CHECK(semantic_equivalent("payInvoice", "settleInvoice", cfg));
  CHECK_FALSE(semantic_equivalent("payInvoice", "settleInvoice"));
}

TEST_CASE("implementation-quality sub-score") {
  const auto p = parse(testing::read_fixture("staking/Staking.sol"));
  const auto schema = staking_schema();
  const FunctionDecl* stake = p.surface.find_function("stake");
  REQUIRE(stake);
  const FunctionDecl* one[] = {stake};
  CHECK(score_q_impl(p.surface, one, schema).score == doctest::Approx(50));

  const auto mixed = parse(R"(pragma solidity ^0.8.0;
contract C {
  uint256 total;
  address owner;
  event Added(uint256 amount);
  modifier onlyOwner() { require(msg.sender == owner, "owner"); _; }
  function add(uint256 amount) external onlyOwner { require(amount > 0, "zero"); total += amount; emit Added(amount); }
  function noop(uint256 amount) external {}
})");
  const FunctionDecl* both[] = {mixed.surface.find_function("add"), mixed.surface.find_function("noop")};
  ContractSchema with_party;
  with_party.obligations = {{"Owner", "add funds", "", ""}};
  CHECK(score_q_impl(mixed.surface, both, with_party).score == doctest::Approx(25));
  CHECK(score_q_impl(mixed.surface, {}, with_party).score == 0);
}

TEST_CASE("M1 vacuous case") {
  const auto p = parse(testing::read_fixture("staking/Staking.sol"));
  ContractSchema empty;
  const auto r = score_m1_functional(empty, p.surface);
  CHECK(r.score >= 50);
  CHECK(r.score <= 100);
}

TEST_CASE("staking contract breakdown") {
  const auto p = parse(testing::read_fixture("staking/Staking.sol"));
  const auto schema = staking_schema();
  const auto lint = lint_forbidden_patterns(p.surface, p.source);
  const auto report = evaluate_quality(schema, nullptr, p.surface, p.source, lint);
  CHECK(report.scores.m1_functional == doctest::Approx(100));
  CHECK(report.scores.m2_variable == doctest::Approx(85));
  CHECK(report.scores.m3_state_machine == doctest::Approx(70));
  CHECK(report.scores.m4_business_logic == doctest::Approx(75));
  CHECK(report.scores.m5_code_quality == doctest::Approx(90));
  CHECK(report.composite == doctest::Approx(83.5));
  CHECK(report.grade == Grade::B);
  CHECK(std::abs(report.composite - composite(report.scores)) < 1e-9);
  CHECK(report.source_of_scores == ScoreSource::Deterministic);

  // poolInfos is in the schema but not in the contract
  bool missed_pool = false;
  for (const auto& ev : report.evidence[1])
    for (const auto& m : ev.missed) missed_pool |= m.find("poolInfos") != std::string::npos;
  CHECK(missed_pool);
}

TEST_CASE("M5 deductions") {
  const auto p = parse(R"(pragma solidity ^0.8.0;
contract Q {
  uint256 x;
  uint256 never;
  // TODO finish
  function a(uint256 v) public { require(v > 0); x = v; }
  function b() public {}
})");
  const auto lint = lint_forbidden_patterns(p.surface, p.source);
  // placeholder 15, empty body 10, unused var 10, missing message 10, no events 10
  CHECK(score_m5_code_quality(p.surface, lint).score == doctest::Approx(45));

  std::vector<LintFinding> many(20, LintFinding{LintPattern::PlaceholderMarker, 1, ""});
  CHECK(score_m5_code_quality(p.surface, many).score == 0);
}

TEST_CASE("M3 without a state machine") {
  const auto p = parse("pragma solidity ^0.8.0; contract S { uint x; event E(); function f() public { x = 1; emit E(); } }");
  CHECK(score_m3_state_machine(ContractSchema{}, nullptr, p.surface).score == 100);
}

TEST_CASE("M4 vacuous categories") {
  const auto p = parse("pragma solidity ^0.8.0; contract S { uint x; function f() public { x = 1; } }");
  CHECK(score_m4_business_logic(ContractSchema{}, p.surface, p.source).score == 100);
}

TEST_CASE("report invariants") {
  const auto r = report_from_scores({92, 85, 90, 86, 80}, ScoreSource::LlmJudge);
  CHECK(r.composite == doctest::Approx(87.35));
  CHECK(r.grade == Grade::B);
  CHECK(r.source_of_scores == ScoreSource::LlmJudge);
  const auto e = empty_quality_report();
  CHECK(e.composite == 0);
  CHECK(e.grade == Grade::F);
}

TEST_CASE("evaluation is deterministic") {
  const auto p = parse(testing::read_fixture("corpus/c23_escrow_fsm.sol"));
  const auto schema = staking_schema();
  const auto lint = lint_forbidden_patterns(p.surface, p.source);
  const auto a = evaluate_quality(schema, nullptr, p.surface, p.source, lint);
  const auto b = evaluate_quality(schema, nullptr, p.surface, p.source, lint);
  CHECK(a.scores == b.scores);
  CHECK(a.components == b.components);
}

TEST_CASE("metric settings") {
  MetricConfig cfg;
  apply_metric_setting(cfg, "weight.m1", "0.3");
  CHECK(cfg.weights[0] == 0.3);
  apply_metric_setting(cfg, "m5.placeholder_penalty", "20");
  CHECK(cfg.m5_placeholder_penalty == 20);
  apply_metric_setting(cfg, "synonym.pay", "settle, remit");
  CHECK(cfg.synonyms["pay"] == std::vector<std::string>{"settle", "remit"});
  CHECK_THROWS_AS(apply_metric_setting(cfg, "weight.m9", "1"), ConfigError);
  CHECK_THROWS_AS(apply_metric_setting(cfg, "weight.m1", "abc"), ConfigError);
  CHECK(describe_metric_config(MetricConfig{}).find("weight.m4 = 0.35") != std::string::npos);
}
