#include <fstream>

#include "doctest.h"
#include "helpers.hpp"
#include "solbench/compile.hpp"

using namespace solbench;
using namespace std::chrono_literals;

namespace {

std::filesystem::path fake_compiler(const std::filesystem::path& dir, const std::string& name, const std::string& body) {
  const auto path = dir / name;
  std::ofstream(path) << "#!/bin/sh\n" << body << "\n";
  std::filesystem::permissions(path, std::filesystem::perms::owner_all);
  return path;
}

}  // namespace

TEST_CASE("compile rate") {
  const auto s = compile_rate(7637, 1187, 176);
  REQUIRE(s.rate);
  CHECK(*s.rate * 100 == doctest::Approx(86.55).epsilon(0.0005));
  CHECK(std::round(*s.rate * 1000) / 10 == 86.5);
  CHECK(s.checked == 8824);
  CHECK(s.total == 9000);
  CHECK_FALSE(compile_rate(0, 0, 5).rate);

  std::vector<CompileResult> results(3);
  results[0].status = CompileStatus::Success;
  results[1].status = CompileStatus::Failure;
  CHECK(compile_rate(results) == compile_rate(1, 1, 1));
  CHECK(parse_compile_status(to_string(CompileStatus::NotChecked)) == CompileStatus::NotChecked);
}

TEST_CASE("compiler resolution") {
  CompilerSet set({{{0, 4, 26}, "a"}, {{0, 5, 17}, "b"}, {{0, 8, 19}, "c"}, {{0, 8, 26}, "d"}, {{0, 9, 0}, "e"}});
  CHECK(set.resolve({"^0.4.24"})->version == Version{0, 4, 26});
  CHECK(set.resolve({">=0.4.22 <0.6.0"})->version == Version{0, 5, 17});
  CHECK(set.resolve({"^0.8.0"})->version == Version{0, 8, 26});
  CHECK(set.resolve({"0.8.19"})->version == Version{0, 8, 19});
  CHECK(set.resolve({})->version == Version{0, 8, 26});
  CHECK(set.resolve({"^0.6.0"}) == nullptr);
  CHECK(CompilerSet().resolve({}) == nullptr);
}

TEST_CASE("discovery recognizes the usual executable names") {
  const auto dir = testing::temp_dir("discover");
  fake_compiler(dir, "solc-0.8.26", "true");
  fake_compiler(dir, "solc-v0.5.17", "true");
  fake_compiler(dir, "solc-linux-amd64-v0.7.6+commit.7338295f", "true");
  fake_compiler(dir, "solc-latest", "true");
  std::ofstream(dir / "solc-0.6.12") << "not executable";
  const auto set = CompilerSet::discover(dir);
  std::vector<std::string> versions;
  for (const auto& c : set.compilers()) versions.push_back(c.version.str());
  std::sort(versions.begin(), versions.end());
  CHECK(versions == std::vector<std::string>{"0.5.17", "0.7.6", "0.8.26"});
  CHECK(CompilerSet::discover(dir / "missing").empty());
  std::filesystem::remove_all(dir);
}

TEST_CASE("unavailable compilers are reported, not thrown") {
  const auto none = compile_check("pragma solidity ^0.8.0; contract A {}", 5s, CompilerSet{});
  CHECK(none.status == CompileStatus::NotChecked);
  CHECK(none.reason == "no compiler installed");

  CompilerSet only_old({{{0, 4, 26}, "/nonexistent/solc"}});
  const auto unmatched = compile_check("pragma solidity ^0.8.0; contract A {}", 5s, only_old);
  CHECK(unmatched.status == CompileStatus::NotChecked);
  CHECK(unmatched.reason.find("^0.8.0") != std::string::npos);

  const auto missing = compile_check("pragma solidity ^0.4.0; contract A {}", 5s, only_old);
  CHECK(missing.status == CompileStatus::NotChecked);
  CHECK(missing.reason.rfind("compiler could not be started", 0) == 0);
}

TEST_CASE("misbehaving compilers") {
  const auto dir = testing::temp_dir("fakesolc");
  CompilerSet garbage({{{0, 8, 1}, fake_compiler(dir, "solc-0.8.1", "echo boom >&2; exit 3")}});
  const auto g = compile_check("contract A {}", 5s, garbage);
  CHECK(g.status == CompileStatus::Failure);
  REQUIRE(g.diagnostics.size() == 1);
  CHECK(g.diagnostics[0].message.find("boom") != std::string::npos);

  CompilerSet slow({{{0, 8, 2}, fake_compiler(dir, "solc-0.8.2", "sleep 5")}});
  const auto s = compile_check("contract A {}", 200ms, slow);
  CHECK(s.status == CompileStatus::Failure);
  CHECK(s.diagnostics[0].message.find("timed out") != std::string::npos);
  CHECK(s.duration < 3s);
  std::filesystem::remove_all(dir);
}

TEST_CASE("real compilers") {
  const auto& set = testing::compilers();
  if (set.empty()) {
    MESSAGE("no solc found in " << testing::solc_dir() << "; skipping");
    return;
  }
  const auto ok = compile_check(testing::read_fixture("staking/Staking.sol"), 120s, set);
  CHECK(ok.status == CompileStatus::Success);
  CHECK_FALSE(ok.compiler_version.empty());

  const auto bad = compile_check("pragma solidity ^0.8.0;\ncontract A {\n  function f() public { x = 1; }\n}\n", 120s, set);
  CHECK(bad.status == CompileStatus::Failure);
  bool located = false;
  for (const auto& d : bad.diagnostics) located |= d.severity == "error" && d.line == 3;
  CHECK(located);

  if (set.resolve({"^0.4.24"})) {
    const auto legacy = compile_check(testing::read_fixture("corpus/c03_crowdsale.sol"), 120s, set);
    CHECK(legacy.status == CompileStatus::Success);
    CHECK(legacy.compiler_version.rfind("0.4.", 0) == 0);
  }
}
