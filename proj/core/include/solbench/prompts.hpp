#pragma once

#include <string>
#include <string_view>

namespace solbench::prompts {

/// Bumped whenever any prompt text changes; stored in every record.
inline constexpr std::string_view kVersion = "2025.1";

struct AgentPrompt {
  std::string_view role;
  std::string_view goal;
  std::string_view system_prompt;
};

const AgentPrompt& parser();
const AgentPrompt& generator();
const AgentPrompt& auditor();
const AgentPrompt& refiner();
const AgentPrompt& evaluator();

std::string parse_request(std::string_view requirement, std::string_view fsm_text);
std::string generate_request(std::string_view schema_json, std::string_view requirement);
std::string audit_request(std::string_view contract);
std::string refine_request(std::string_view contract, std::string_view findings_json);
std::string evaluate_request(std::string_view schema_json, std::string_view contract);

/// Appended to the user prompt when the previous response was unusable.
std::string corrective_suffix(std::string_view problem);

}  // namespace solbench::prompts
