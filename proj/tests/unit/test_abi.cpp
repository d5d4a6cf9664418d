#include <algorithm>

#include "doctest.h"
#include "helpers.hpp"
#include "solbench/abi.hpp"
#include "solbench/error.hpp"

using namespace solbench;

namespace {

std::string key(const AbiEntry& e) {
  std::string k = std::string(to_string(e.kind)) + ":" + e.name.value_or("") + "(";
  for (const auto& p : e.inputs) k += p.type + ",";
  return k + ")";
}

std::vector<AbiEntry> canonical(std::vector<AbiEntry> v) {
  std::sort(v.begin(), v.end(), [](const AbiEntry& a, const AbiEntry& b) { return key(a) < key(b); });
  return v;
}

AbiExport export_file(const std::string& rel) {
  return export_abi(parse_surface(testing::read_fixture(rel)).surface);
}

}  // namespace

TEST_CASE("exported ABI matches the compiler's ABI for the whole corpus") {
  int compared = 0;
  for (const auto& e : std::filesystem::directory_iterator(testing::fixture("corpus"))) {
    if (e.path().extension() != ".sol") continue;
    CAPTURE(e.path().filename().string());
    auto golden_path = e.path();
    golden_path.replace_extension(".abi.json");
    const auto golden = canonical(abi_from_json(testing::read(golden_path)));
    const auto exported = export_abi(parse_surface(testing::read(e.path())).surface);
    CHECK(exported.warnings.empty());
    const auto ours = canonical(exported.entries);
    REQUIRE(ours.size() == golden.size());
    for (std::size_t i = 0; i < ours.size(); ++i) {
      CAPTURE(key(golden[i]));
      CHECK(ours[i] == golden[i]);
    }
    ++compared;
  }
  CHECK(compared >= 25);
}

TEST_CASE("staking contract exports two functions and two events") {
  const auto abi = export_file("staking/Staking.sol");
  CHECK(abi.warnings.empty());
  REQUIRE(abi.entries.size() == 4);
  const auto count = [&](AbiKind k) {
    return std::count_if(abi.entries.begin(), abi.entries.end(), [&](const AbiEntry& e) { return e.kind == k; });
  };
  CHECK(count(AbiKind::Function) == 2);
  CHECK(count(AbiKind::Event) == 2);
  const auto stake = std::find_if(abi.entries.begin(), abi.entries.end(),
                                  [](const AbiEntry& e) { return e.name == "stake"; });
  REQUIRE(stake != abi.entries.end());
  CHECK(stake->state_mutability == "nonpayable");
  REQUIRE(stake->inputs.size() == 1);
  CHECK(stake->inputs[0] == AbiParam{"_amount", "uint256", std::nullopt});
  CHECK(stake->outputs.empty());
}

TEST_CASE("golden JSON for the staking contract") {
  const auto json = abi_to_json(export_file("staking/Staking.sol").entries);
  CHECK(json == testing::read_fixture("staking/abi.golden.json"));
}

TEST_CASE("round trip is byte-identical") {
  for (const auto& e : std::filesystem::directory_iterator(testing::fixture("corpus"))) {
    if (e.path().extension() != ".sol") continue;
    CAPTURE(e.path().filename().string());
    const auto entries = export_abi(parse_surface(testing::read(e.path())).surface).entries;
    const auto text = abi_to_json(entries);
    const auto back = abi_from_json(text);
    CHECK(back == entries);
    CHECK(abi_to_json(back) == text);
  }
}

TEST_CASE("type normalization") {
  const auto s = parse_surface(testing::read_fixture("corpus/c24_price_feed.sol")).surface;
  CHECK(normalize_abi_type("uint", s) == "uint256");
  CHECK(normalize_abi_type("int", s) == "int256");
  CHECK(normalize_abi_type("address payable", s) == "address");
  CHECK(normalize_abi_type("byte", s) == "bytes1");
  CHECK(normalize_abi_type("uint[2][]", s) == "uint256[2][]");
  CHECK(normalize_abi_type("mapping(address => uint)", s) == std::nullopt);
  CHECK(normalize_abi_type("NoSuchType", s) == std::nullopt);
}

TEST_CASE("unsupported parameter types become warnings") {
  const auto s = parse_surface(R"(pragma solidity ^0.8.0;
contract C {
  struct P { uint a; }
  function f(P memory p) public pure returns (uint) { return p.a; }
  event E(uint x);
})").surface;
  const auto abi = export_abi(s);
  REQUIRE(abi.warnings.size() == 1);
  CHECK(abi.warnings[0].entry == "f");
  CHECK(abi.warnings[0].type_text == "P");
  CHECK(abi.entries.size() == 2);
}

TEST_CASE("malformed ABI JSON") {
  CHECK_THROWS_AS(abi_from_json("{}"), Error);
  CHECK_THROWS_AS(abi_from_json("[1]"), Error);
  CHECK_THROWS_AS(abi_from_json(R"([{"type":"function","name":"f","inputs":[{"name":"x"}]}])"), Error);
  CHECK_THROWS_AS(abi_from_json(R"([{"type":"weird"}])"), Error);
  CHECK(abi_from_json("[]").empty());
}
