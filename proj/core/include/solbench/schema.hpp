#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace solbench {

struct Party {
  std::string name;
  std::string role;
  std::optional<std::string> address;

  bool operator==(const Party&) const = default;
};

struct FinancialTerm {
  std::string amount;
  std::string currency;
  std::string purpose;
  std::optional<std::string> frequency;
  std::optional<std::string> due_date;

  bool operator==(const FinancialTerm&) const = default;
};

struct DateTerm {
  std::string label;
  /// ISO-8601 date or free relative-duration text ("30 days after signing").
  std::string value;

  bool operator==(const DateTerm&) const = default;
};

struct Asset {
  std::string type;
  std::string description;
  std::string location;
  std::string value;

  bool operator==(const Asset&) const = default;
};

struct Obligation {
  std::string party;
  std::string responsibility;
  std::string deadline;
  std::string breach_penalty;

  bool operator==(const Obligation&) const = default;
};

struct Transition {
  std::string from_state;
  std::string to_state;
  std::string trigger;
  std::string guard;

  bool operator==(const Transition&) const = default;
};

struct ConditionBlock {
  std::vector<std::string> function_names;
  std::vector<std::string> variable_names;
  std::vector<std::string> state_names;
  std::vector<Transition> transitions;
  std::vector<std::string> events;
  std::vector<std::string> logic_conditions;

  bool operator==(const ConditionBlock&) const = default;
};

/// Structured form of a natural-language contract specification.
struct ContractSchema {
  std::vector<Party> parties;
  std::vector<FinancialTerm> financial_terms;
  std::vector<DateTerm> dates;
  std::vector<Asset> assets;
  std::vector<Obligation> obligations;
  ConditionBlock conditions;
  std::vector<std::string> termination_conditions;

  bool operator==(const ContractSchema&) const = default;
};

enum class SchemaFlagKind {
  UnresolvedParty,
  UnresolvedState,
  BadIdentifier,
  Degenerate,
  BadAddress,
  BadAmount,
  EmptyPartyName,
};

std::string_view to_string(SchemaFlagKind kind);

struct SchemaFlag {
  SchemaFlagKind kind;
  /// The offending value (party name, state name, identifier...).
  std::string subject;

  bool operator==(const SchemaFlag&) const = default;
};

/// Reports every invariant violation in `schema`. Total and side-effect free.
std::vector<SchemaFlag> validate_schema(const ContractSchema& schema);

/// Parses the snake_case JSON wire form. Unknown keys are ignored and, when
/// `ignored_keys` is given, reported there as dotted paths. `null` values
/// count as absent. Throws MalformedSchema on invalid JSON or wrong shapes.
ContractSchema schema_from_json(std::string_view text,
                                std::vector<std::string>* ignored_keys = nullptr);

std::string schema_to_json(const ContractSchema& schema);

bool is_hex_address(std::string_view s);
bool is_non_negative_decimal(std::string_view s);
/// `YYYY-MM-DD` optionally followed by a `T...` time part.
bool looks_like_iso8601(std::string_view s);

}  // namespace solbench
