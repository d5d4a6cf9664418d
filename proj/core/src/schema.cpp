#include "solbench/schema.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include "json_util.hpp"
#include "solbench/error.hpp"
#include "solbench/text.hpp"

namespace solbench {
namespace {

using detail::json;
using Reader = detail::JsonReader<MalformedSchema>;

std::string key_of(std::string_view name) { return text::to_lower(text::trim(name)); }

void note_unknown(const json& node, std::initializer_list<std::string_view> known,
                  const std::string& path, std::vector<std::string>* ignored) {
  if (!ignored) return;
  for (auto it = node.begin(); it != node.end(); ++it) {
    if (std::find(known.begin(), known.end(), it.key()) == known.end()) {
      ignored->push_back(path.empty() ? it.key() : path + "." + it.key());
    }
  }
}

json opt(const std::optional<std::string>& v) { return v ? json(*v) : json(nullptr); }

}  // namespace

std::string_view to_string(SchemaFlagKind kind) {
  switch (kind) {
    case SchemaFlagKind::UnresolvedParty: return "unresolved_party";
    case SchemaFlagKind::UnresolvedState: return "unresolved_state";
    case SchemaFlagKind::BadIdentifier: return "bad_identifier";
    case SchemaFlagKind::Degenerate: return "degenerate";
    case SchemaFlagKind::BadAddress: return "bad_address";
    case SchemaFlagKind::BadAmount: return "bad_amount";
    case SchemaFlagKind::EmptyPartyName: return "empty_party_name";
  }
  return "?";
}

bool is_hex_address(std::string_view s) {
  if (s.size() != 42 || s[0] != '0' || (s[1] != 'x' && s[1] != 'X')) return false;
  return std::all_of(s.begin() + 2, s.end(),
                     [](char c) { return std::isxdigit(static_cast<unsigned char>(c)) != 0; });
}

bool is_non_negative_decimal(std::string_view s) {
  std::string t = text::trim(s);
  std::erase(t, ',');
  std::erase(t, '_');
  if (t.empty()) return false;
  bool digits = false, dot = false;
  for (char c : t) {
    if (std::isdigit(static_cast<unsigned char>(c))) digits = true;
    else if (c == '.' && !dot) dot = true;
    else return false;
  }
  return digits;
}

bool looks_like_iso8601(std::string_view s) {
  const std::string t = text::trim(s);
  if (t.size() < 10) return false;
  auto digits = [&](std::size_t from, std::size_t n) {
    for (std::size_t i = from; i < from + n; ++i)
      if (!std::isdigit(static_cast<unsigned char>(t[i]))) return false;
    return true;
  };
  if (!(digits(0, 4) && t[4] == '-' && digits(5, 2) && t[7] == '-' && digits(8, 2))) return false;
  const int month = std::stoi(t.substr(5, 2));
  const int day = std::stoi(t.substr(8, 2));
  if (month < 1 || month > 12 || day < 1 || day > 31) return false;
  return t.size() == 10 || t[10] == 'T' || t[10] == ' ';
}

std::vector<SchemaFlag> validate_schema(const ContractSchema& schema) {
  std::vector<SchemaFlag> flags;
  std::set<std::string> party_keys;
  for (const auto& p : schema.parties) {
    if (text::trim(p.name).empty()) flags.push_back({SchemaFlagKind::EmptyPartyName, p.role});
    else party_keys.insert(key_of(p.name));
    if (p.address && !is_hex_address(text::trim(*p.address)))
      flags.push_back({SchemaFlagKind::BadAddress, *p.address});
  }
  for (const auto& o : schema.obligations) {
    if (!party_keys.count(key_of(o.party))) flags.push_back({SchemaFlagKind::UnresolvedParty, o.party});
  }
  for (const auto& f : schema.financial_terms) {
    if (!is_non_negative_decimal(f.amount)) flags.push_back({SchemaFlagKind::BadAmount, f.amount});
  }
  const auto& c = schema.conditions;
  std::set<std::string> states(c.state_names.begin(), c.state_names.end());
  for (const auto& t : c.transitions) {
    if (!states.count(t.from_state)) flags.push_back({SchemaFlagKind::UnresolvedState, t.from_state});
    if (!states.count(t.to_state)) flags.push_back({SchemaFlagKind::UnresolvedState, t.to_state});
  }
  for (const auto* list : {&c.function_names, &c.variable_names, &c.state_names, &c.events}) {
    for (const auto& name : *list) {
      if (!text::is_identifier(name) || name.find('$') != std::string::npos)
        flags.push_back({SchemaFlagKind::BadIdentifier, name});
    }
  }
  if (c.function_names.empty()) flags.push_back({SchemaFlagKind::Degenerate, "no function names"});
  return flags;
}

ContractSchema schema_from_json(std::string_view text, std::vector<std::string>* ignored_keys) {
  auto parsed = detail::try_parse(text);
  if (!parsed) throw MalformedSchema("schema is not valid JSON");
  const json& root = *parsed;
  if (!root.is_object()) throw MalformedSchema("schema top level must be a JSON object");

  note_unknown(root,
               {"parties", "financial_terms", "dates", "assets", "obligations", "conditions",
                "termination_conditions"},
               "", ignored_keys);

  ContractSchema s;
  Reader r(root, "$");
  r.objects("parties", [&](const Reader& p) {
    note_unknown(p.node(), {"name", "role", "address"}, p.path(), ignored_keys);
    s.parties.push_back({p.string("name"), p.string("role"), p.optional_string("address")});
  });
  r.objects("financial_terms", [&](const Reader& f) {
    note_unknown(f.node(), {"amount", "currency", "purpose", "frequency", "due_date"}, f.path(),
                 ignored_keys);
    s.financial_terms.push_back({f.string("amount"), f.string("currency"), f.string("purpose"),
                                 f.optional_string("frequency"), f.optional_string("due_date")});
  });
  r.objects("dates", [&](const Reader& d) {
    note_unknown(d.node(), {"label", "value"}, d.path(), ignored_keys);
    s.dates.push_back({d.string("label"), d.string("value")});
  });
  r.objects("assets", [&](const Reader& a) {
    note_unknown(a.node(), {"type", "description", "location", "value"}, a.path(), ignored_keys);
    s.assets.push_back({a.string("type"), a.string("description"), a.string("location"), a.string("value")});
  });
  r.objects("obligations", [&](const Reader& o) {
    note_unknown(o.node(), {"party", "responsibility", "deadline", "breach_penalty"}, o.path(),
                 ignored_keys);
    s.obligations.push_back(
        {o.string("party"), o.string("responsibility"), o.string("deadline"), o.string("breach_penalty")});
  });
  if (const json* cond = r.find("conditions")) {
    if (!cond->is_object()) throw MalformedSchema("$.conditions: expected an object");
    note_unknown(*cond,
                 {"function_names", "variable_names", "state_names", "transitions", "events",
                  "logic_conditions"},
                 "conditions", ignored_keys);
    Reader c(*cond, "$.conditions");
    s.conditions.function_names = c.string_list("function_names");
    s.conditions.variable_names = c.string_list("variable_names");
    s.conditions.state_names = c.string_list("state_names");
    s.conditions.events = c.string_list("events");
    s.conditions.logic_conditions = c.string_list("logic_conditions");
    c.objects("transitions", [&](const Reader& t) {
      note_unknown(t.node(), {"from_state", "to_state", "trigger", "guard"}, t.path(), ignored_keys);
      s.conditions.transitions.push_back(
          {t.string("from_state"), t.string("to_state"), t.string("trigger"), t.string("guard")});
    });
  }
  s.termination_conditions = r.string_list("termination_conditions");
  return s;
}

std::string schema_to_json(const ContractSchema& s) {
  json root = json::object();
  json parties = json::array();
  for (const auto& p : s.parties)
    parties.push_back({{"name", p.name}, {"role", p.role}, {"address", opt(p.address)}});
  json terms = json::array();
  for (const auto& f : s.financial_terms)
    terms.push_back({{"amount", f.amount},
                     {"currency", f.currency},
                     {"purpose", f.purpose},
                     {"frequency", opt(f.frequency)},
                     {"due_date", opt(f.due_date)}});
  json dates = json::array();
  for (const auto& d : s.dates) dates.push_back({{"label", d.label}, {"value", d.value}});
  json assets = json::array();
  for (const auto& a : s.assets)
    assets.push_back({{"type", a.type}, {"description", a.description}, {"location", a.location}, {"value", a.value}});
  json obligations = json::array();
  for (const auto& o : s.obligations)
    obligations.push_back({{"party", o.party},
                           {"responsibility", o.responsibility},
                           {"deadline", o.deadline},
                           {"breach_penalty", o.breach_penalty}});
  json transitions = json::array();
  for (const auto& t : s.conditions.transitions)
    transitions.push_back(
        {{"from_state", t.from_state}, {"to_state", t.to_state}, {"trigger", t.trigger}, {"guard", t.guard}});
  root["parties"] = parties;
  root["financial_terms"] = terms;
  root["dates"] = dates;
  root["assets"] = assets;
  root["obligations"] = obligations;
  root["conditions"] = {{"function_names", s.conditions.function_names},
                        {"variable_names", s.conditions.variable_names},
                        {"state_names", s.conditions.state_names},
                        {"transitions", transitions},
                        {"events", s.conditions.events},
                        {"logic_conditions", s.conditions.logic_conditions}};
  root["termination_conditions"] = s.termination_conditions;
  return root.dump(2);
}

}  // namespace solbench
