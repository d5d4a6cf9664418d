#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "solbench/surface.hpp"

namespace solbench {

enum class AbiKind { Function, Constructor, Event, Fallback, Receive };

std::string_view to_string(AbiKind k);

struct AbiParam {
  std::string name;
  std::string type;
  /// Set for event inputs only.
  std::optional<bool> indexed;

  bool operator==(const AbiParam&) const = default;
};

struct AbiEntry {
  AbiKind kind = AbiKind::Function;
  std::optional<std::string> name;
  std::vector<AbiParam> inputs;
  std::vector<AbiParam> outputs;
  /// pure | view | nonpayable | payable; empty for events.
  std::string state_mutability;
  bool anonymous = false;

  bool operator==(const AbiEntry&) const = default;
};

struct AbiWarning {
  std::string entry;
  std::string type_text;
  std::string message;
};

struct AbiExport {
  std::vector<AbiEntry> entries;
  /// Types the exporter could not normalize (emitted verbatim).
  std::vector<AbiWarning> warnings;
};

/// Canonical ABI type for a declared parameter type, or nullopt for structs,
/// mappings and unknown names.
std::optional<std::string> normalize_abi_type(std::string_view raw, const ContractSurface& surface);

/// Public/external/default-visibility functions, constructor, fallback,
/// receive and events of the primary contract, in declaration order.
AbiExport export_abi(const ContractSurface& surface);

/// Standard contract-ABI JSON array, sorted keys, two-space indentation.
std::string abi_to_json(const std::vector<AbiEntry>& entries);

/// Inverse of abi_to_json. Throws Error on malformed input.
std::vector<AbiEntry> abi_from_json(std::string_view text);

}  // namespace solbench
