#include <algorithm>
#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "solbench/audit.hpp"
#include "solbench/error.hpp"

using namespace solbench;

namespace {

AuditReport audit_source(const std::string& src) { return heuristic_audit(parse_surface(src).surface, src); }
AuditReport audit_file(const std::string& rel) { return audit_source(testing::read_fixture(rel)); }

bool has(const AuditReport& r, AuditCategory c, const std::string& fn = {}) {
  return std::any_of(r.findings.begin(), r.findings.end(),
                     [&](const AuditFinding& f) { return f.category == c && (fn.empty() || f.function == fn); });
}

std::string fingerprint(const AuditFinding& f) {
  return std::string(to_string(f.category)) + "/" + std::string(to_string(f.severity)) + "/" + f.function + "/" +
         std::to_string(f.line.value_or(0));
}

}  // namespace

TEST_CASE("should_refine truth table") {
  const Severity all[] = {Severity::None, Severity::Low, Severity::Medium, Severity::High, Severity::Critical};
  int cases = 0;
  for (auto sev : all)
    for (bool approved : {false, true})
      for (int count : {0, 2}) {
        const bool expected = count < 2 && !approved && sev >= Severity::Medium;
        CHECK(should_refine(sev, approved, count, 2) == expected);
        AuditReport r;
        r.severity_level = sev;
        r.approved = approved;
        CHECK(should_refine(r, RefinementState{count, 2, {}}) == expected);
        ++cases;
      }
  CHECK(cases == 20);
  CHECK(should_refine(Severity::High, false, 0, 2));
  CHECK_FALSE(should_refine(Severity::Critical, false, 2, 2));
  CHECK_FALSE(should_refine(Severity::Low, false, 0, 2));
  CHECK_FALSE(should_refine(Severity::High, true, 0, 2));
  CHECK_FALSE(should_refine(Severity::High, false, 0, 0));
}

TEST_CASE("refinement loop terminates within the bound for any report sequence") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 2000; ++trial) {
    const int max = static_cast<int>(rng() % 4);
    RefinementState state{0, max, {}};
    int audits = 0;
    while (true) {
      AuditReport r;
      r.severity_level = static_cast<Severity>(rng() % 5);
      r.approved = rng() % 3 == 0;
      ++audits;
      if (!should_refine(r, state)) break;
      ++state.refinement_count;
      REQUIRE(audits < 100);
    }
    CHECK(state.refinement_count <= max);
  }
}

TEST_CASE("severity lattice") {
  CHECK(severity_max(Severity::Low, Severity::Critical) == Severity::Critical);
  CHECK(severity_max(Severity::None, Severity::None) == Severity::None);
  CHECK(severity_max(Severity::Medium, Severity::High) == Severity::High);
  CHECK(parse_severity(" HIGH ") == Severity::High);
  CHECK(parse_severity("informational") == Severity::Low);
  CHECK_FALSE(parse_severity("severe"));
  CHECK(parse_category("access_control") == AuditCategory::AccessControl);
  CHECK(parse_category("Access Control") == AuditCategory::AccessControl);
  CHECK(parse_category("Denial-of-Service") == AuditCategory::DenialOfService);
  CHECK_FALSE(parse_category("gas"));
}

TEST_CASE("reentrancy: flagged without a guard, cleared by a guard or by ordering") {
  const auto vuln = audit_file("audit/reentrancy.vulnerable.sol");
  CHECK(has(vuln, AuditCategory::Reentrancy, "withdraw"));
  CHECK(vuln.severity_level == Severity::High);
  CHECK_FALSE(vuln.approved);

  // What remains is the literal access-control rule: deposit and withdraw
  // write state with no modifier or msg.sender require.
  for (const auto* rel : {"audit/reentrancy.guarded.sol", "audit/reentrancy.cei.sol"}) {
    CAPTURE(rel);
    const auto r = audit_file(rel);
    CHECK_FALSE(has(r, AuditCategory::Reentrancy));
    CHECK(r.severity_level == Severity::Medium);
    for (const auto& f : r.findings) CHECK(f.category == AuditCategory::AccessControl);
  }
}

TEST_CASE("staking withdraw passes") {
  const auto r = audit_file("staking/Staking.sol");
  CHECK_FALSE(has(r, AuditCategory::Reentrancy, "withdraw"));
  // stake transfers in before recording the stake and carries no guard
  CHECK(has(r, AuditCategory::Reentrancy, "stake"));
}

TEST_CASE("empty contract") {
  const auto r = audit_source("pragma solidity ^0.8.0; contract E {}");
  CHECK(r.findings.empty());
  CHECK(r.severity_level == Severity::None);
  CHECK(r.approved);
}

TEST_CASE("category rules") {
  const auto r = audit_source(R"(pragma solidity ^0.7.0;
contract Mixed {
  address owner;
  uint256 total;
  address[] payees;
  uint256 deadline;
  modifier onlyOwner() { require(msg.sender == owner, "owner"); _; }
  function open(uint256 v) public { total = total + v; }
  function tip() external payable { total += 1; }
  function payAll() external onlyOwner { for (uint i = 0; i < payees.length; i++) { payable(payees[i]).transfer(1); } }
  function setOwner(address next) external onlyOwner { owner = next; }
  function release() external onlyOwner { require(block.timestamp > deadline, "early"); payable(owner).transfer(total); }
  function poke(address target) external onlyOwner { require(target != address(0), "zero"); target.call(""); }
})");
  CHECK(has(r, AuditCategory::AccessControl, "open"));
  CHECK_FALSE(has(r, AuditCategory::AccessControl, "setOwner"));
  CHECK(has(r, AuditCategory::ArithmeticSafety, "open"));
  CHECK(has(r, AuditCategory::EtherHandling, "tip"));
  CHECK(has(r, AuditCategory::DenialOfService, "payAll"));
  CHECK(has(r, AuditCategory::InputValidation, "setOwner"));
  CHECK_FALSE(has(r, AuditCategory::InputValidation, "poke"));
  CHECK(has(r, AuditCategory::TimestampDependence, "release"));
  CHECK(has(r, AuditCategory::ExternalCallSafety, "poke"));
  CHECK(r.severity_level == Severity::Medium);
  CHECK_FALSE(r.approved);
  for (const auto& f : r.findings) CHECK(f.line.has_value());
}

TEST_CASE("SafeMath silences arithmetic findings before 0.8") {
  const auto r = audit_source(R"(pragma solidity ^0.6.0;
library SafeMath { function add(uint a, uint b) internal pure returns (uint) { uint c = a + b; require(c >= a); return c; } }
contract T { using SafeMath for uint; uint x; address owner;
  function bump(uint v) public { require(msg.sender == owner, "owner"); x = x.add(v) + 1; } })");
  CHECK_FALSE(has(r, AuditCategory::ArithmeticSafety));
}

TEST_CASE("heuristic audit is order independent") {
  const auto src = testing::read_fixture("corpus/c07_multisig.sol");
  auto surface = parse_surface(src).surface;
  auto base = heuristic_audit(surface, src);
  std::vector<std::string> want;
  for (const auto& f : base.findings) want.push_back(fingerprint(f));
  std::sort(want.begin(), want.end());
  std::mt19937_64 rng(5);
  for (int i = 0; i < 20; ++i) {
    std::shuffle(surface.functions.begin(), surface.functions.end(), rng);
    const auto r = heuristic_audit(surface, src);
    std::vector<std::string> got;
    for (const auto& f : r.findings) got.push_back(fingerprint(f));
    std::sort(got.begin(), got.end());
    CHECK(got == want);
    CHECK(r.severity_level == base.severity_level);
  }
}

TEST_CASE("LLM audit parsing") {
  const auto r = parse_audit_json(R"(Here is the audit:
```json
{"severity_level": "low", "approved": false,
 "findings": [
   {"category": "Reentrancy", "severity": "high", "line": "42", "remediation": "guard it"},
   {"category": "Gas", "severity": "low"},
   {"category": "access control", "severity": "weird", "line": 0}
 ], "summary": "two issues"}
```)");
  CHECK(r.source == AuditSource::Llm);
  REQUIRE(r.findings.size() == 2);
  CHECK(r.findings[0].line == 42);
  CHECK(r.findings[1].category == AuditCategory::AccessControl);
  CHECK(r.findings[1].severity == Severity::Medium);
  CHECK_FALSE(r.findings[1].line);
  CHECK(r.severity_level == Severity::High);
  CHECK(r.invariant_mismatch);
  CHECK_FALSE(r.approved);
  CHECK(r.summary == "two issues");

  const auto clean = parse_audit_json(R"({"findings": []})");
  CHECK(clean.approved);
  CHECK(clean.severity_level == Severity::None);
  CHECK_FALSE(clean.invariant_mismatch);

  // approved is honored even when it contradicts the findings
  const auto lenient = parse_audit_json(R"({"approved": true, "findings": [{"category": "Reentrancy", "severity": "critical"}]})");
  CHECK(lenient.approved);
  CHECK(lenient.invariant_mismatch);

  CHECK_THROWS_AS(parse_audit_json("no json here"), Error);
}

TEST_CASE("decisive report") {
  AuditReport llm, heur;
  llm.source = AuditSource::Llm;
  llm.severity_level = Severity::Medium;
  heur.severity_level = Severity::High;
  CHECK(&decisive_report(llm, heur) == &heur);
  heur.severity_level = Severity::Medium;
  CHECK(&decisive_report(llm, heur) == &llm);
}
