#include "solbench/prompts.hpp"

namespace solbench::prompts {

namespace {

// Changing any text here requires bumping kVersion.
constexpr std::string_view kParserSystem =
    R"(You are an expert contract analyst who extracts EXACT, SPECIFIC information from contracts.
CRITICAL INSTRUCTIONS:
1. Extract the EXACT function names mentioned in the contract (e.g., "initializeLease", "payRent", "confirmDelivery")
2. Extract the EXACT variable names mentioned (e.g., "monthlyRent", "securityDeposit", "deliveryDate")
3. Extract the EXACT state names mentioned (e.g., "Pending", "Active", "Completed", "Terminated")
4. DO NOT use generic placeholders - use the specific terminology from the contract
5. Capture ALL conditions, transitions, and logic flows mentioned
Your goal: Create a structured representation that preserves ALL specific details from the contract text.)";

constexpr std::string_view kGeneratorSystem =
    R"(You are a Solidity expert who generates COMPLETE, FUNCTIONAL smart contracts.

Follow ALL instructions in the prompt carefully, including:
- Complete Phase 1 semantic analysis before writing code
- Follow all 12 critical generation rules
- Avoid all forbidden patterns
- Follow correct implementation patterns
- Complete all checklist items before finalizing

Return ONLY complete, production-ready Solidity code with NO placeholders.)";

constexpr std::string_view kAuditorSystem =
    R"(You are a blockchain security expert who audits smart contracts for vulnerabilities. You check for reentrancy, access control issues, integer overflow, and other common exploits. You provide severity ratings (none/low/medium/high/critical) based on exploitability and impact. You give specific line references and concrete remediation steps, not generic advice.)";

constexpr std::string_view kRefinerSystem =
    R"(You are a Solidity security specialist who fixes smart contract vulnerabilities. Given a contract and a list of security issues from an audit, you rewrite the code to address every vulnerability while maintaining the original functionality. You follow the Checks-Effects-Interactions pattern, add reentrancy guards where needed, implement proper access control, validate all inputs with require(), and ensure no silent failures. You return ONLY the fixed Solidity code.)";

constexpr std::string_view kEvaluatorSystem =
    R"(You are an expert smart contract quality analyst specializing in evaluating how well generated Solidity code implements natural language contract specifications. You systematically assess functional completeness, variable fidelity, state machine correctness, business logic implementation, and code quality. You provide detailed scoring with specific evidence from the code and specification, identifying what was implemented correctly and what is missing.)";

constexpr std::string_view kSchemaShape = R"({
  "parties": [{"name": "", "role": "", "address": null}],
  "financial_terms": [{"amount": "", "currency": "", "purpose": "", "frequency": null, "due_date": null}],
  "dates": [{"label": "", "value": ""}],
  "assets": [{"type": "", "description": "", "location": "", "value": ""}],
  "obligations": [{"party": "", "responsibility": "", "deadline": "", "breach_penalty": ""}],
  "conditions": {
    "function_names": [], "variable_names": [], "state_names": [],
    "transitions": [{"from_state": "", "to_state": "", "trigger": "", "guard": ""}],
    "events": [], "logic_conditions": []
  },
  "termination_conditions": []
})";

constexpr std::string_view kAuditShape = R"({
  "severity_level": "none|low|medium|high|critical",
  "approved": true,
  "summary": "",
  "findings": [{"category": "Reentrancy|AccessControl|ArithmeticSafety|EtherHandling|DenialOfService|InputValidation|TimestampDependence|ExternalCallSafety",
                "severity": "low", "line": 1, "function": "", "remediation": ""}]
})";

constexpr std::string_view kScoresShape = R"({
  "functional_completeness": 0, "variable_fidelity": 0, "state_machine_correctness": 0,
  "business_logic_fidelity": 0, "code_quality": 0
})";

const AgentPrompt kParser{"Contract Analysis Expert", "Extract precise information from legal contracts",
                          kParserSystem};
const AgentPrompt kGenerator{"Solidity Developer", "Turn a contract schema into a complete Solidity contract",
                             kGeneratorSystem};
const AgentPrompt kAuditor{"Smart Contract Auditor", "Find exploitable weaknesses in a Solidity contract",
                           kAuditorSystem};
const AgentPrompt kRefiner{"Security Remediation Engineer", "Fix every reported vulnerability",
                           kRefinerSystem};
const AgentPrompt kEvaluator{"Contract Quality Analyst", "Score a contract against its specification",
                             kEvaluatorSystem};

}  // namespace

const AgentPrompt& parser() { return kParser; }
const AgentPrompt& generator() { return kGenerator; }
const AgentPrompt& auditor() { return kAuditor; }
const AgentPrompt& refiner() { return kRefiner; }
const AgentPrompt& evaluator() { return kEvaluator; }

std::string parse_request(std::string_view requirement, std::string_view fsm_text) {
  std::string out = "Contract text:\n";
  out += requirement;
  if (!fsm_text.empty()) {
    out += "\n\nState machine notes:\n";
    out += fsm_text;
  }
  out += "\n\nAnswer with one JSON object of this shape and nothing else:\n";
  out += kSchemaShape;
  out += "\n";
  return out;
}

std::string generate_request(std::string_view schema_json, std::string_view requirement) {
  std::string out = "Contract schema:\n";
  out += schema_json;
  out += "\n\nOriginal contract text:\n";
  out += requirement;
  out +=
      "\n\nWrite one Solidity 0.8 source file implementing this contract. Use the exact function, variable and "
      "state names from the schema, model the states as an enum with guarded transitions, revert with a "
      "message on every failed check, and emit an event for every completed action. Put helper contracts "
      "first and the main contract last. Reply with the code only, in a ```solidity block.\n";
  return out;
}

std::string audit_request(std::string_view contract) {
  std::string out = "Audit this contract:\n```solidity\n";
  out += contract;
  out += "\n```\n\nReport with one JSON object of this shape and nothing else:\n";
  out += kAuditShape;
  out += "\nSet approved to true only when the highest severity is none or low.\n";
  return out;
}

std::string refine_request(std::string_view contract, std::string_view findings_json) {
  std::string out = "Contract:\n```solidity\n";
  out += contract;
  out += "\n```\n\nAudit findings:\n";
  out += findings_json;
  out += "\n\nReply with the complete corrected source in a ```solidity block.\n";
  return out;
}

std::string evaluate_request(std::string_view schema_json, std::string_view contract) {
  std::string out = "Specification schema:\n";
  out += schema_json;
  out += "\n\nContract:\n```solidity\n";
  out += contract;
  out += "\n```\n\nScore each dimension from 0 to 100 and answer with one JSON object of this shape:\n";
  out += kScoresShape;
  out += "\n";
  return out;
}

std::string corrective_suffix(std::string_view problem) {
  std::string out = "\n\nYour previous reply could not be used: ";
  out += problem;
  out += ". Reply again following the requested format exactly.\n";
  return out;
}

}  // namespace solbench::prompts
