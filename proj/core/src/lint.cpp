#include "solbench/lint.hpp"

#include <algorithm>
#include <array>

#include "lexer.hpp"
#include "solbench/text.hpp"

namespace solbench {

std::string_view to_string(LintPattern p) {
  switch (p) {
    case LintPattern::EmptyFunctionBody: return "EmptyFunctionBody";
    case LintPattern::UnusedStateVariable: return "UnusedStateVariable";
    case LintPattern::SilentFailure: return "SilentFailure";
    case LintPattern::DecorativeEvent: return "DecorativeEvent";
    case LintPattern::PlaceholderMarker: return "PlaceholderMarker";
  }
  return "?";
}

namespace {

constexpr std::array<std::string_view, 3> kMarkers = {"todo", "fixme", "placeholder"};

}  // namespace

std::vector<LintFinding> lint_forbidden_patterns(const ContractSurface& surface,
                                                 std::string_view source) {
  std::vector<LintFinding> out;
  for (const auto& fn : surface.functions) {
    const int line = std::max(1, fn.line);
    if (fn.body_present && fn.body_stats.statement_count == 0) {
      out.push_back({LintPattern::EmptyFunctionBody, line, "function " + fn.name + " has an empty body"});
    }
    for (int at : fn.facts.silent_returns) {
      out.push_back({LintPattern::SilentFailure, std::max(1, at),
                     "function " + fn.name + " returns silently instead of reverting"});
    }
    const auto effects = transitive_effects(surface, fn);
    if (!fn.facts.emitted_events.empty() && effects.state_writes == 0 && effects.external_calls == 0) {
      std::vector<std::string> names = fn.facts.emitted_events;
      std::sort(names.begin(), names.end());
      names.erase(std::unique(names.begin(), names.end()), names.end());
      for (const auto& ev : names) {
        out.push_back({LintPattern::DecorativeEvent, line,
                       "event " + ev + " emitted in " + fn.name + " without any state change or call"});
      }
    }
  }
  for (const auto& v : surface.state_variables) {
    if (v.references == 0) {
      out.push_back({LintPattern::UnusedStateVariable, std::max(1, v.line),
                     "state variable " + v.name + " is never used"});
    }
  }
  for (const auto& c : detail::lex(source).comments) {
    const auto lower = text::to_lower(c.text);
    for (auto marker : kMarkers) {
      if (lower.find(marker) != std::string::npos) {
        out.push_back({LintPattern::PlaceholderMarker, std::max(1, c.line),
                       "comment contains " + text::to_lower(std::string(marker))});
        break;
      }
    }
  }
  std::stable_sort(out.begin(), out.end(), [](const LintFinding& a, const LintFinding& b) {
    if (a.location != b.location) return a.location < b.location;
    return a.pattern < b.pattern;
  });
  return out;
}

}  // namespace solbench
