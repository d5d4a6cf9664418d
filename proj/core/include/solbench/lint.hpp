#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "solbench/surface.hpp"

namespace solbench {

enum class LintPattern {
  EmptyFunctionBody,
  UnusedStateVariable,
  SilentFailure,
  DecorativeEvent,
  PlaceholderMarker,
};

std::string_view to_string(LintPattern p);

struct LintFinding {
  LintPattern pattern = LintPattern::EmptyFunctionBody;
  int location = 1;
  std::string detail;

  bool operator==(const LintFinding&) const = default;
};

/// Forbidden-pattern checks over the primary contract of `source`.
/// Findings are ordered by line, then pattern.
std::vector<LintFinding> lint_forbidden_patterns(const ContractSurface& surface,
                                                 std::string_view source);

}  // namespace solbench
