#include <algorithm>

#include "doctest.h"
#include "helpers.hpp"
#include "json.hpp"
#include "solbench/error.hpp"
#include "solbench/pipeline.hpp"

using namespace solbench;
using nlohmann::json;

namespace {

PipelineConfig quick_config(bool compile = false) {
  PipelineConfig c;
  c.compile = compile;
  c.transport.initial_backoff = std::chrono::milliseconds(1);
  return c;
}

Pipeline scripted(const std::string& script, PipelineConfig config = quick_config()) {
  return Pipeline(config, ScriptedBackend::from_file(testing::fixture("scripts/" + script).string()),
                  testing::compilers());
}

BenchmarkEntry staking_entry() {
  std::ifstream in(testing::fixture("datasets/staking10.jsonl"));
  std::string line;
  std::getline(in, line);
  auto item = parse_entry_line(line, 1);
  REQUIRE(std::holds_alternative<BenchmarkEntry>(item));
  return std::get<BenchmarkEntry>(std::move(item));
}

std::size_t count_events(const PipelineRecord& r, EventKind k) {
  return static_cast<std::size_t>(
      std::count_if(r.events.begin(), r.events.end(), [&](const PipelineEvent& e) { return e.kind == k; }));
}

}  // namespace

TEST_CASE("extract_solidity") {
  CHECK(extract_solidity("```solidity\npragma solidity ^0.8.0;\ncontract A {}\n```") ==
        "pragma solidity ^0.8.0;\ncontract A {}\n");
  const auto prose = "Here you go:\n```\ncontract B { }\n```\nThanks.";
  CHECK(extract_solidity(prose).find("contract B") == 0);
  CHECK(extract_solidity("pragma solidity ^0.8.0; contract C {}").find("contract C") != std::string::npos);
  CHECK_THROWS_AS(extract_solidity("I cannot help with that."), NotSolidity);
  CHECK_THROWS_AS(extract_solidity(""), NotSolidity);
}

TEST_CASE("extract_json_object") {
  CHECK(extract_json_object("```json\n{\"a\": 1}\n```") == "{\"a\":1}");
  CHECK(extract_json_object("prefix {\"a\": {\"b\": \"}\"}} suffix") == "{\"a\":{\"b\":\"}\"}}");
  CHECK(extract_json_object("no object here") == "no object here");
}

TEST_CASE("staking scenario: one refinement fixes the flagged contract") {
  auto pipeline = scripted("staking.json");
  const auto entry = staking_entry();
  std::vector<PipelineEvent> seen;
  const auto record = pipeline.run(entry, [&](const std::string& id, const PipelineEvent& e) {
    CHECK(id == entry.id);
    seen.push_back(e);
  });
  CHECK_FALSE(record.failed);
  REQUIRE(record.schema);
  CHECK(record.refinements == 1);
  CHECK(count_events(record, EventKind::RefineTriggered) == 1);
  REQUIRE(record.audit_trail.size() == 2);
  CHECK_FALSE(record.audit_trail[0].approved);
  CHECK(record.audit_trail[1].approved);
  CHECK(record.initial_contract == testing::read_fixture("staking/Staking.sol"));
  CHECK(record.final_contract == testing::read_fixture("staking/StakingFixed.sol"));
  CHECK(record.quality.grade == Grade::B);
  CHECK(record.quality.composite == doctest::Approx(83.5));
  REQUIRE(record.comparison);
  CHECK(record.comparison->ground_truth.composite == doctest::Approx(83.5));
  CHECK(record.comparison->composite_delta == doctest::Approx(0));
  CHECK(seen.size() == record.events.size());

  for (std::size_t i = 1; i < record.events.size(); ++i)
    CHECK(record.events[i - 1].timestamp_ms <= record.events[i].timestamp_ms);

  std::vector<std::string> phases;
  for (const auto& a : record.phase_artifacts) phases.push_back(a.phase);
  CHECK(phases == std::vector<std::string>{"parse", "generate", "audit", "refine.1", "audit.1", "abi", "compile",
                                           "evaluate", "compare"});
  for (const auto& a : record.phase_artifacts) {
    CAPTURE(a.phase);
    CHECK(a.input_digest.size() == 64);
  }
  CHECK(json::parse(record.abi_json).size() == 4);
}

TEST_CASE("records are byte-reproducible with the logical clock") {
  const auto entry = staking_entry();
  const auto a = record_to_json(scripted("staking.json").run(entry));
  const auto b = record_to_json(scripted("staking.json").run(entry));
  CHECK(a == b);
  const auto j = json::parse(a);
  CHECK(j["entry_id"] == entry.id);
  CHECK(j.contains("phase_artifacts"));
}

TEST_CASE("clean contract is approved without refinement") {
  const auto record = scripted("staking_clean.json").run(staking_entry());
  CHECK_FALSE(record.failed);
  CHECK(record.refinements == 0);
  CHECK(count_events(record, EventKind::RefineTriggered) == 0);
  CHECK(count_events(record, EventKind::AuditApproved) == 1);
  REQUIRE(record.audit_trail.size() == 1);
  CHECK(record.final_contract == record.initial_contract);
}

TEST_CASE("disabled reinforcement never refines") {
  auto config = quick_config();
  config.enable_reinforcement = false;
  const auto record = scripted("staking.json", config).run(staking_entry());
  CHECK(record.refinements == 0);
  CHECK(record.audit_trail.size() == 1);
  CHECK(record.final_contract == testing::read_fixture("staking/Staking.sol"));
}

TEST_CASE("unusable schema replies fail the record") {
  const auto record = scripted("bad_schema.json").run(staking_entry());
  CHECK(record.failed);
  CHECK_FALSE(record.schema);
  CHECK(record.quality.composite == 0);
  CHECK(count_events(record, EventKind::Error) == 1);
  CHECK(count_events(record, EventKind::Retried) == 1);
  REQUIRE(record.phase_artifacts.size() == 1);
  CHECK(record.phase_artifacts[0].responses.size() == 2);
  CHECK(record.phase_artifacts[0].responses[0].text == "I cannot produce JSON for this.");
}

TEST_CASE("transient errors retry; an unusable audit falls back to the pattern audit") {
  const auto record = scripted("flaky.json").run(staking_entry());
  CHECK_FALSE(record.failed);
  REQUIRE(record.schema);
  const auto retried = std::find_if(record.events.begin(), record.events.end(), [](const PipelineEvent& e) {
    return e.kind == EventKind::Retried && e.phase == "parse";
  });
  REQUIRE(retried != record.events.end());
  CHECK(retried->detail.find("transport") == 0);
  CHECK(record.phase_artifacts[0].retry_count >= 1);
  REQUIRE(record.audit_trail.size() == 1);
  CHECK(record.audit_trail[0].source == AuditSource::Heuristic);
  CHECK(record.audit_trail[0].approved);
  const auto& notes = record.audit_trail[0].notes;
  CHECK(std::any_of(notes.begin(), notes.end(),
                    [](const std::string& n) { return n.find("pattern audit used") != std::string::npos; }));
}

TEST_CASE("unavailable backend fails the record") {
  const auto record = scripted("down.json").run(staking_entry());
  CHECK(record.failed);
  CHECK_FALSE(record.schema);
  CHECK(count_events(record, EventKind::Error) == 1);
  CHECK(record.quality.composite == 0);
}

TEST_CASE("compiles the final contract when compilers are installed") {
  if (testing::compilers().empty()) {
    MESSAGE("no solc installed; skipped");
    return;
  }
  const auto record = scripted("staking.json", quick_config(true)).run(staking_entry());
  CHECK(record.compile.status == CompileStatus::Success);
  REQUIRE(record.initial_compile);
  CHECK(record.initial_compile->status == CompileStatus::Success);
  CHECK(record.compile.compiler_version.rfind("0.8", 0) == 0);
}
