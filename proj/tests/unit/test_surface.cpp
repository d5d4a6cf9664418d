#include <algorithm>
#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "json.hpp"
#include "solbench/error.hpp"
#include "solbench/surface.hpp"

using namespace solbench;
using nlohmann::json;

namespace {

std::vector<std::string> sorted(std::vector<std::string> v) {
  std::sort(v.begin(), v.end());
  return v;
}

std::vector<std::filesystem::path> corpus() {
  std::vector<std::filesystem::path> out;
  for (const auto& e : std::filesystem::directory_iterator(testing::fixture("corpus")))
    if (e.path().extension() == ".sol") out.push_back(e.path());
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST_CASE("corpus inventories match the compiler's AST") {
  const auto files = corpus();
  REQUIRE(files.size() >= 25);
  std::set<std::string> minors;
  for (const auto& path : files) {
    CAPTURE(path.filename().string());
    const auto inv = json::parse(testing::read(std::filesystem::path(path).replace_extension(".inventory.json")));
    const auto result = parse_surface(testing::read(path));
    const auto& s = result.surface;
    minors.insert(inv["compiler"].get<std::string>().substr(0, 3));

    CHECK(s.contract_name == inv["contract"].get<std::string>());
    CHECK(s.uses_inheritance == inv["bases"].get<std::vector<std::string>>());

    std::vector<std::string> fns, vars, events, mods, structs;
    for (const auto& f : s.functions) fns.push_back(f.name);
    for (const auto& v : s.state_variables) vars.push_back(v.name);
    for (const auto& e : s.events) events.push_back(e.name);
    for (const auto& m : s.modifiers) mods.push_back(m.name);
    for (const auto& st : s.structs) structs.push_back(st.name);
    CHECK(sorted(fns) == sorted(inv["functions"].get<std::vector<std::string>>()));
    CHECK(vars == inv["state_variables"].get<std::vector<std::string>>());
    CHECK(sorted(events) == sorted(inv["events"].get<std::vector<std::string>>()));
    CHECK(sorted(mods) == sorted(inv["modifiers"].get<std::vector<std::string>>()));
    CHECK(sorted(structs) == sorted(inv["structs"].get<std::vector<std::string>>()));

    std::map<std::string, std::vector<std::string>> enums;
    for (const auto& e : s.enums) enums[e.name] = e.members;
    CHECK(enums == inv["enums"].get<std::map<std::string, std::vector<std::string>>>());
  }
  CHECK(minors == std::set<std::string>{"0.4", "0.5", "0.6", "0.7", "0.8"});
}

TEST_CASE("staking contract surface") {
  const auto s = parse_surface(testing::read_fixture("staking/Staking.sol")).surface;
  CHECK(s.contract_name == "Staking");
  REQUIRE(s.functions.size() == 2);
  const auto* stake = s.find_function("stake");
  REQUIRE(stake);
  CHECK(stake->modifiers == std::vector<std::string>{"afterStart", "beforeEnd"});
  CHECK(stake->visibility == Visibility::External);
  REQUIRE(stake->params.size() == 1);
  CHECK(stake->params[0].type == "uint256");
  CHECK(stake->facts.emitted_events == std::vector<std::string>{"Staked"});
  const auto* withdraw = s.find_function("withdraw");
  REQUIRE(withdraw);
  CHECK(withdraw->modifiers == std::vector<std::string>{"nonReentrant"});
  CHECK(s.find_modifier("nonReentrant") != nullptr);

  const auto binding = bind_state_enum(s);
  REQUIRE(binding);
  CHECK(binding->enum_name == "State");
  CHECK(binding->variable == "currentState");
  CHECK(count_states(s) == 3);
  CHECK(s.pragma_versions == std::vector<std::string>{"^0.8.0"});
  std::vector<std::string> others;
  for (const auto& u : s.other_units) others.push_back(u.name);
  CHECK(others == std::vector<std::string>{"IERC20", "ReentrancyGuard"});
}

TEST_CASE("legacy syntax") {
  const auto s = parse_surface(testing::read_fixture("corpus/c01_simple_storage.sol")).surface;
  const auto* ctor = s.find_function("constructor");
  REQUIRE(ctor);
  const auto* get = s.find_function("get");
  REQUIRE(get);
  CHECK(get->mutability == Mutability::View);
  const auto* fb = s.find_function("fallback");
  REQUIRE(fb);
  CHECK(fb->mutability == Mutability::Payable);

  const auto crowd = parse_surface(testing::read_fixture("corpus/c03_crowdsale.sol")).surface;
  CHECK(crowd.find_function("constructor") != nullptr);
  // `throw` inside an if counts as a reverting guard in the inherited modifier.
  const auto* only_owner = crowd.find_modifier("onlyOwner");
  REQUIRE(only_owner);
  REQUIRE_FALSE(only_owner->facts.guards.empty());
  CHECK(only_owner->facts.guards[0].reverts);
  CHECK(only_owner->facts.guards[0].mentions_sender);
}

TEST_CASE("base constructor calls are not modifiers") {
  const auto s = parse_surface(testing::read_fixture("corpus/c27_modifiers_args.sol")).surface;
  const auto* ctor = s.find_function("constructor");
  REQUIRE(ctor);
  CHECK(ctor->modifiers.empty());
  const auto* sub = s.find_function("subscribe");
  REQUIRE(sub);
  CHECK(sub->modifiers == std::vector<std::string>{"validPlan", "costs"});
  REQUIRE(sub->modifier_uses.size() == 2);
  CHECK(sub->modifier_uses[0].argument_identifiers == std::vector<std::string>{"plan"});
}

TEST_CASE("comments and strings do not leak declarations") {
  const auto s = parse_surface(testing::read_fixture("corpus/c26_tricky_lexing.sol")).surface;
  CHECK(s.contract_name == "Notes");
  CHECK(s.find_function("ghost") == nullptr);
  CHECK(s.find_function("commentedOut") == nullptr);
  CHECK(s.find_function("nope") == nullptr);
  CHECK(s.other_units.empty());
}

TEST_CASE("body facts") {
  const auto s = parse_surface(testing::read_fixture("corpus/c22_custom_errors.sol")).surface;
  const auto* w = s.find_function("withdraw");
  REQUIRE(w);
  REQUIRE(w->facts.calls.size() == 1);
  CHECK(w->facts.calls[0].kind == CallKind::LowLevel);
  CHECK(w->facts.calls[0].return_used);
  REQUIRE(w->facts.writes.size() == 1);
  CHECK(w->facts.writes[0].variable == "balances");
  CHECK(w->facts.writes[0].position < w->facts.calls[0].position);
  const auto reverting_ifs = std::count_if(w->facts.guards.begin(), w->facts.guards.end(),
                                           [](const Guard& g) { return g.kind == GuardKind::If && g.reverts; });
  CHECK(reverting_ifs == 2);

  const auto dao = parse_surface(testing::read_fixture("corpus/c14_dao.sol")).surface;
  const auto* vote = dao.find_function("vote");
  REQUIRE(vote);
  // Writes through a storage pointer land on the underlying state variable.
  std::set<std::string> written;
  for (const auto& wr : vote->facts.writes) written.insert(wr.variable);
  CHECK(written == std::set<std::string>{"hasVoted", "proposals"});

  const auto split = parse_surface(testing::read_fixture("corpus/c20_splitter.sol")).surface;
  const auto* ctor = split.find_function("constructor");
  REQUIRE(ctor);
  CHECK(ctor->body_stats.loop_count == 1);
  CHECK(ctor->facts.called_names.count("_addPayee") == 1);
  CHECK(transitive_effects(split, *ctor).emits == 1);
}

TEST_CASE("unparseable sources") {
  CHECK_THROWS_AS(parse_surface(""), UnparseableSource);
  CHECK_THROWS_AS(parse_surface("pragma solidity ^0.8.0;\ninterface I { function f() external; }"),
                  UnparseableSource);
  CHECK_THROWS_AS(parse_surface("library L { }"), UnparseableSource);
  CHECK_NOTHROW(parse_surface("abstract contract A { function f() public virtual; }"));
}

TEST_CASE("fuzz: random bytes never crash the parser") {
  std::mt19937_64 rng(20240917);
  const std::string alphabet = "contract function modifier enum event {}();,=.<>+-*/\"'\n\t abcXYZ019_$[]!&|";
  const auto base = testing::read_fixture("corpus/c23_escrow_fsm.sol");
  int parsed = 0;
  for (int i = 0; i < 10000; ++i) {
    std::string input;
    switch (i % 3) {
      case 0: {  // raw bytes
        input.resize(rng() % 256);
        for (auto& c : input) c = static_cast<char>(rng() & 0xff);
        break;
      }
      case 1: {  // token soup
        const auto n = rng() % 200;
        for (std::size_t k = 0; k < n; ++k) input.push_back(alphabet[rng() % alphabet.size()]);
        break;
      }
      default: {  // mutated real contract
        input = base;
        const auto edits = 1 + rng() % 8;
        for (std::size_t k = 0; k < edits; ++k) {
          const auto pos = rng() % input.size();
          switch (rng() % 3) {
            case 0: input.erase(pos, 1 + rng() % 20); break;
            case 1: input.insert(pos, 1, alphabet[rng() % alphabet.size()]); break;
            default: input[pos] = static_cast<char>(rng() & 0xff);
          }
          if (input.empty()) input = "x";
        }
      }
    }
    try {
      (void)parse_surface(input);
      ++parsed;
    } catch (const UnparseableSource&) {
    }
  }
  CHECK(parsed > 0);
}
