#pragma once

#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace solbench {

enum class Visibility { Default, Public, Private, External, Internal };
enum class Mutability { None, View, Pure, Payable };
enum class UnitKind { Contract, AbstractContract, Interface, Library };

std::string_view to_string(Visibility v);
std::string_view to_string(Mutability m);
std::string_view to_string(UnitKind k);

struct Param {
  std::string name;
  /// Declared type with data location stripped (`string`, `uint256[]`).
  std::string type;
  bool indexed = false;

  bool operator==(const Param&) const = default;
};

struct BodyStats {
  int statement_count = 0;
  int require_count = 0;
  int emit_count = 0;
  int external_call_count = 0;
  int state_write_count = 0;
  int loop_count = 0;
  bool reads_block_timestamp = false;

  bool operator==(const BodyStats&) const = default;
};

enum class GuardKind { Require, Assert, Revert, If };

/// A condition that gates execution: require/assert arguments, `if`
/// conditions, and bare reverts (empty condition).
struct Guard {
  GuardKind kind = GuardKind::Require;
  std::string condition;
  std::vector<std::string> identifiers;
  int line = 0;
  /// require/assert with a reason string, or revert with a message/error.
  bool has_message = false;
  /// `if` whose branch reverts (or throws).
  bool reverts = false;
  bool mentions_sender = false;
  bool mentions_timestamp = false;
};

enum class CallKind { LowLevel, EtherTransfer, Member };

struct ExternalCall {
  CallKind kind = CallKind::Member;
  std::string member;
  int line = 0;
  std::size_t position = 0;
  bool return_used = true;
  bool in_loop = false;
};

struct StateWrite {
  std::string variable;
  /// Right-hand side text for plain assignments (`State.Active`), else empty.
  std::string value;
  int line = 0;
  std::size_t position = 0;
};

/// Facts recovered from a function or modifier body.
struct BodyFacts {
  std::vector<Guard> guards;
  std::vector<ExternalCall> calls;
  std::vector<StateWrite> writes;
  std::vector<std::string> emitted_events;
  std::set<std::string> identifiers;
  /// Plain `name(` calls, candidate internal calls.
  std::set<std::string> called_names;
  /// Lines of `if (...) return;` without else.
  std::vector<int> silent_returns;
  bool returns_value = false;
  bool has_arithmetic = false;
};

struct ModifierUse {
  std::string name;
  std::string arguments;
  std::vector<std::string> argument_identifiers;
};

struct FunctionDecl {
  /// "constructor", "fallback" and "receive" for the special functions.
  std::string name;
  std::vector<Param> params;
  std::vector<std::string> returns;
  std::vector<Param> return_params;
  Visibility visibility = Visibility::Default;
  Mutability mutability = Mutability::None;
  std::vector<std::string> modifiers;
  std::vector<ModifierUse> modifier_uses;
  bool body_present = false;
  bool is_virtual = false;
  BodyStats body_stats;
  BodyFacts facts;
  int line = 0;
  int end_line = 0;

  bool is_special() const {
    return name == "constructor" || name == "fallback" || name == "receive";
  }
  bool is_state_changing() const {
    return mutability != Mutability::View && mutability != Mutability::Pure;
  }
  bool externally_visible() const {
    return visibility == Visibility::Public || visibility == Visibility::External ||
           visibility == Visibility::Default;
  }
};

struct StateVarDecl {
  std::string name;
  std::string type;
  Visibility visibility = Visibility::Internal;
  bool is_constant = false;
  bool is_immutable = false;
  /// Identifier occurrences inside the contract besides the declaration.
  int references = 0;
  int line = 0;
};

struct EnumDecl {
  std::string name;
  std::vector<std::string> members;
  int line = 0;
};

struct EventDecl {
  std::string name;
  std::vector<Param> params;
  bool anonymous = false;
  int line = 0;
};

struct ModifierDecl {
  std::string name;
  std::vector<Param> params;
  bool body_present = false;
  BodyFacts facts;
  int line = 0;
};

struct StructDecl {
  std::string name;
  std::vector<Param> members;
  int line = 0;
};

/// A top-level declaration other than the scored contract.
struct UnitRef {
  std::string name;
  UnitKind kind = UnitKind::Contract;
  int line = 0;
};

struct ParseWarning {
  int line = 0;
  std::string message;
};

/// Declaration-level model of the primary (last) contract in a source file.
struct ContractSurface {
  std::string contract_name;
  UnitKind kind = UnitKind::Contract;
  int line = 0;
  std::vector<std::string> pragma_versions;
  std::vector<FunctionDecl> functions;
  std::vector<StateVarDecl> state_variables;
  std::vector<EnumDecl> enums;
  std::vector<EventDecl> events;
  std::vector<ModifierDecl> modifiers;
  std::vector<StructDecl> structs;
  std::vector<std::string> uses_inheritance;
  int end_line = 0;

  /// Every other contract, interface and library in the file.
  std::vector<UnitRef> other_units;
  /// Modifiers declared anywhere in the file (inherited lookup).
  std::vector<ModifierDecl> file_modifiers;
  /// Enums and structs declared anywhere in the file.
  std::vector<EnumDecl> file_enums;
  std::vector<StructDecl> file_structs;

  const FunctionDecl* find_function(std::string_view name) const;
  const StateVarDecl* find_state_variable(std::string_view name) const;
  const EnumDecl* find_enum(std::string_view name) const;
  const ModifierDecl* find_modifier(std::string_view name) const;
};

struct ParseResult {
  ContractSurface surface;
  std::vector<ParseWarning> warnings;
};

/// Tolerant structural parse. Throws UnparseableSource when no contract
/// (abstract or concrete) is declared.
ParseResult parse_surface(std::string_view source);

struct StateBinding {
  std::string enum_name;
  std::string variable;
};

/// The enum whose type is used by a state variable; ties prefer variables
/// named like `state`/`currentState`/`status`, else the first declared.
std::optional<StateBinding> bind_state_enum(const ContractSurface& surface);

/// Members of the bound state enum, 0 when none is bound.
int count_states(const ContractSurface& surface);

struct TransitiveEffects {
  int state_writes = 0;
  int external_calls = 0;
  int emits = 0;

  bool any() const { return state_writes + external_calls + emits > 0; }
};

/// Effects of `fn` plus those of the contract's own functions it calls,
/// followed transitively (modifier bodies excluded).
TransitiveEffects transitive_effects(const ContractSurface& surface, const FunctionDecl& fn);

}  // namespace solbench
