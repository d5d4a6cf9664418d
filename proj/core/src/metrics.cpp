#include "solbench/metrics.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>
#include <unordered_set>

#include "lexer.hpp"
#include "solbench/error.hpp"
#include "solbench/text.hpp"

namespace solbench {

std::string_view to_string(Grade g) {
  switch (g) {
    case Grade::A: return "A";
    case Grade::B: return "B";
    case Grade::C: return "C";
    case Grade::D: return "D";
    case Grade::F: return "F";
  }
  return "?";
}

std::optional<Grade> parse_grade(std::string_view s) {
  const auto t = text::trim(s);
  if (t.size() != 1) return std::nullopt;
  switch (std::toupper(static_cast<unsigned char>(t[0]))) {
    case 'A': return Grade::A;
    case 'B': return Grade::B;
    case 'C': return Grade::C;
    case 'D': return Grade::D;
    case 'F': return Grade::F;
    default: return std::nullopt;
  }
}

std::string_view to_string(MatchKind k) {
  switch (k) {
    case MatchKind::Exact: return "exact";
    case MatchKind::Semantic: return "semantic";
    case MatchKind::None: return "none";
  }
  return "?";
}

std::string_view to_string(ScoreSource s) {
  return s == ScoreSource::LlmJudge ? "llm_judge" : "deterministic";
}

namespace {

double parse_number(std::string_view key, std::string_view value) {
  const auto t = text::trim(value);
  double out = 0;
  const auto* end = t.data() + t.size();
  const auto [ptr, ec] = std::from_chars(t.data(), end, out);
  if (ec != std::errc() || ptr != end || !std::isfinite(out)) {
    throw ConfigError("setting " + std::string(key) + " expects a number, got '" + t + "'");
  }
  return out;
}

double parse_points(std::string_view key, std::string_view value) {
  const double v = parse_number(key, value);
  if (v < 0) throw ConfigError("setting " + std::string(key) + " must not be negative");
  return v;
}

struct Slot {
  std::string_view key;
  double MetricConfig::*field;
};

constexpr Slot kSlots[] = {
    {"exact_points", &MetricConfig::exact_points},
    {"semantic_points", &MetricConfig::semantic_points},
    {"m1.name_points", &MetricConfig::m1_name_points},
    {"m1.q_impl_points", &MetricConfig::q_impl_points},
    {"m2.name_points", &MetricConfig::m2_name_points},
    {"m2.usage_points", &MetricConfig::m2_usage_points},
    {"m3.state_points", &MetricConfig::m3_state_points},
    {"m3.transition_points", &MetricConfig::m3_transition_points},
    {"m3.guard_points", &MetricConfig::m3_guard_points},
    {"m4.obligation_points", &MetricConfig::m4_obligation_points},
    {"m4.financial_points", &MetricConfig::m4_financial_points},
    {"m4.temporal_points", &MetricConfig::m4_temporal_points},
    {"m4.conditional_points", &MetricConfig::m4_conditional_points},
    {"m5.placeholder_penalty", &MetricConfig::m5_placeholder_penalty},
    {"m5.pattern_penalty", &MetricConfig::m5_pattern_penalty},
    {"m5.missing_message_penalty", &MetricConfig::m5_missing_message_penalty},
    {"m5.no_events_penalty", &MetricConfig::m5_no_events_penalty},
};

double clamp100(double v) { return std::clamp(v, 0.0, 100.0); }

double fraction(int hit, int total) { return total == 0 ? 1.0 : static_cast<double>(hit) / total; }

/// Lowercased tokens, each mapped to every synonym the table declares for it.
bool tokens_equivalent(const std::string& a, const std::string& b, const MetricConfig& cfg) {
  if (a == b) return true;
  auto listed = [&](const std::string& from, const std::string& to) {
    auto it = cfg.synonyms.find(from);
    return it != cfg.synonyms.end() &&
           std::find(it->second.begin(), it->second.end(), to) != it->second.end();
  };
  return listed(a, b) || listed(b, a);
}

bool covers(const std::vector<std::string>& large, const std::vector<std::string>& small,
            const MetricConfig& cfg, bool& shared_long) {
  for (const auto& s : small) {
    bool found = false;
    for (const auto& l : large) {
      if (tokens_equivalent(s, l, cfg)) {
        found = true;
        if (std::max(s.size(), l.size()) >= cfg.semantic_min_token_length) shared_long = true;
      }
    }
    if (!found) return false;
  }
  return true;
}

std::string describe_match(const NameMatch& m) {
  if (m.kind == MatchKind::Exact) return m.expected;
  return m.expected + " ~ " + m.matched.value_or("");
}

void add_name_evidence(std::vector<Evidence>& out, std::string criterion, const std::vector<NameMatch>& matches) {
  Evidence ev{std::move(criterion), {}, {}};
  for (const auto& m : matches) {
    if (m.kind == MatchKind::None) ev.missed.push_back(m.expected);
    else ev.matched.push_back(describe_match(m));
  }
  out.push_back(std::move(ev));
}

double name_ratio(const std::vector<NameMatch>& matches, const MetricConfig& cfg) {
  if (matches.empty()) return 1.0;
  double got = 0;
  for (const auto& m : matches) {
    if (m.kind == MatchKind::Exact) got += cfg.exact_points;
    else if (m.kind == MatchKind::Semantic) got += cfg.semantic_points;
  }
  const double denom = static_cast<double>(matches.size()) * cfg.exact_points;
  return denom > 0 ? got / denom : 0.0;
}

std::vector<std::string> scoring_function_names(const ContractSurface& surface) {
  std::vector<std::string> out;
  for (const auto& f : surface.functions)
    if (!f.is_special()) out.push_back(f.name);
  return out;
}

/// Guards in every function and modifier body of the file's scored contract
/// (modifiers declared in helper contracts included).
std::vector<const Guard*> all_guards(const ContractSurface& surface) {
  std::vector<const Guard*> out;
  for (const auto& f : surface.functions)
    for (const auto& g : f.facts.guards) out.push_back(&g);
  for (const auto& m : surface.modifiers)
    for (const auto& g : m.facts.guards) out.push_back(&g);
  for (const auto& m : surface.file_modifiers)
    for (const auto& g : m.facts.guards) out.push_back(&g);
  return out;
}

bool guard_gates(const Guard& g) { return g.kind != GuardKind::If || g.reverts; }

bool function_is_empty(const FunctionDecl& f) {
  return !f.body_present || f.body_stats.statement_count == 0;
}

std::set<std::string> identifier_tokens(const std::vector<std::string>& idents) {
  std::set<std::string> out;
  for (const auto& id : idents) {
    auto t = text::significant_tokens(id);
    out.insert(t.begin(), t.end());
  }
  return out;
}

/// Digits of a money amount: "$1,500.00 USD" -> "1500".
std::string normalize_amount(std::string_view amount) {
  std::string digits;
  bool seen_dot = false;
  for (char c : amount) {
    if (std::isdigit(static_cast<unsigned char>(c))) {
      digits.push_back(c);
    } else if (c == '.' && !digits.empty() && !seen_dot) {
      seen_dot = true;
      digits.push_back(c);
    } else if (c == ',' || c == '_') {
      continue;
    } else if (!digits.empty()) {
      break;
    }
  }
  if (digits.find('.') != std::string::npos) {
    while (!digits.empty() && digits.back() == '0') digits.pop_back();
    if (!digits.empty() && digits.back() == '.') digits.pop_back();
  }
  return digits;
}

bool time_word(const std::string& token) {
  static const std::unordered_set<std::string> kWords = {
      "time",  "timestamp", "date",   "deadline", "duration", "period", "expiry", "expir",
      "expire", "end",      "start",  "due",      "day",      "month",  "year",   "week",
      "lock",  "unlock",    "delay",  "interval", "term",     "begin",  "hour",   "minute"};
  return kWords.count(token) > 0;
}

}  // namespace

void apply_metric_setting(MetricConfig& config, std::string_view key, std::string_view value) {
  const std::string k = text::trim(key);
  if (k.starts_with("weight.m") && k.size() == 9 && k[8] >= '1' && k[8] <= '5') {
    config.weights[static_cast<std::size_t>(k[8] - '1')] = parse_points(k, value);
    return;
  }
  for (const auto& slot : kSlots) {
    if (slot.key == k) {
      config.*slot.field = parse_points(k, value);
      return;
    }
  }
  if (k == "semantic_min_token_length") {
    const double v = parse_points(k, value);
    if (v != std::floor(v)) throw ConfigError("semantic_min_token_length must be an integer");
    config.semantic_min_token_length = static_cast<std::size_t>(v);
    return;
  }
  if (k == "error_mode_threshold") {
    const double v = parse_number(k, value);
    if (v < 0 || v > 1) throw ConfigError("error_mode_threshold must lie in [0,1]");
    config.error_mode_threshold = v;
    return;
  }
  if (k.starts_with("synonym.") && k.size() > 8) {
    const std::string word = text::to_lower(k.substr(8));
    std::vector<std::string> list;
    std::stringstream ss{std::string(value)};
    std::string item;
    while (std::getline(ss, item, ',')) {
      item = text::to_lower(text::trim(item));
      if (!item.empty()) list.push_back(item);
    }
    config.synonyms[word] = std::move(list);
    return;
  }
  throw ConfigError("unknown metric setting '" + k + "'");
}

std::string describe_metric_config(const MetricConfig& config) {
  std::vector<std::string> lines;
  auto num = [](double v) {
    std::ostringstream os;
    os << v;
    return os.str();
  };
  for (std::size_t i = 0; i < config.weights.size(); ++i)
    lines.push_back("weight.m" + std::to_string(i + 1) + " = " + num(config.weights[i]));
  for (const auto& slot : kSlots) lines.push_back(std::string(slot.key) + " = " + num(config.*slot.field));
  lines.push_back("semantic_min_token_length = " + std::to_string(config.semantic_min_token_length));
  lines.push_back("error_mode_threshold = " + num(config.error_mode_threshold));
  for (const auto& [word, list] : config.synonyms) {
    std::string joined;
    for (const auto& s : list) joined += (joined.empty() ? "" : ",") + s;
    lines.push_back("synonym." + word + " = " + joined);
  }
  std::sort(lines.begin(), lines.end());
  std::string out;
  for (const auto& l : lines) out += l + "\n";
  return out;
}

bool semantic_equivalent(std::string_view expected, std::string_view actual, const MetricConfig& config) {
  const auto a = text::trim(expected);
  const auto b = text::trim(actual);
  if (a.empty() || b.empty()) return false;
  if (text::fold_identifier(a) == text::fold_identifier(b)) return true;
  const auto ta = text::split_identifier(a);
  const auto tb = text::split_identifier(b);
  if (ta.empty() || tb.empty()) return false;
  bool shared_long = false;
  if (covers(ta, tb, config, shared_long) && shared_long) return true;
  shared_long = false;
  return covers(tb, ta, config, shared_long) && shared_long;
}

std::vector<NameMatch> match_names(std::span<const std::string> expected,
                                   std::span<const std::string> actual, const MetricConfig& config) {
  std::vector<NameMatch> out;
  out.reserve(expected.size());
  std::vector<bool> used(actual.size(), false);
  for (const auto& e : expected) out.push_back({e, std::nullopt, MatchKind::None});
  for (auto& m : out) {
    const auto want = text::trim(m.expected);
    for (std::size_t j = 0; j < actual.size(); ++j) {
      if (!used[j] && text::trim(actual[j]) == want) {
        used[j] = true;
        m.matched = actual[j];
        m.kind = MatchKind::Exact;
        break;
      }
    }
  }
  for (auto& m : out) {
    if (m.kind != MatchKind::None) continue;
    for (std::size_t j = 0; j < actual.size(); ++j) {
      if (!used[j] && semantic_equivalent(m.expected, actual[j], config)) {
        used[j] = true;
        m.matched = actual[j];
        m.kind = MatchKind::Semantic;
        break;
      }
    }
  }
  return out;
}

double name_component(int expected, int exact, int semantic, const MetricConfig& config) {
  if (expected <= 0) return config.m1_name_points;
  const double v = (config.exact_points * exact + config.semantic_points * semantic) /
                   (expected * config.exact_points) * config.m1_name_points;
  return std::clamp(v, 0.0, config.m1_name_points);
}

QImplResult score_q_impl(const ContractSurface& surface, std::span<const FunctionDecl* const> matched,
                         const ContractSchema& schema, const MetricConfig& config) {
  QImplResult r;
  if (matched.empty()) return r;
  const bool party_named = std::any_of(schema.obligations.begin(), schema.obligations.end(),
                                       [](const Obligation& o) { return !text::trim(o.party).empty(); });
  const double unit = config.q_impl_points / 4.0;
  for (const FunctionDecl* f : matched) {
    if (!f || function_is_empty(*f)) continue;
    const auto effects = transitive_effects(surface, *f);
    const bool changes = f->is_state_changing();
    // A view or pure function's effect is the value it returns.
    const bool effect = changes ? effects.any() : (f->facts.returns_value || effects.any());
    bool access = true;
    if (party_named && changes && !f->is_special()) {
      access = !f->modifiers.empty() ||
               std::any_of(f->facts.guards.begin(), f->facts.guards.end(),
                           [](const Guard& g) { return g.mentions_sender; });
    }
    const bool events = !changes || effects.emits > 0;
    bool validation = true;
    if (!f->params.empty()) {
      std::unordered_set<std::string> names;
      for (const auto& p : f->params)
        if (!p.name.empty()) names.insert(p.name);
      validation = std::any_of(f->facts.guards.begin(), f->facts.guards.end(), [&](const Guard& g) {
        return guard_gates(g) && std::any_of(g.identifiers.begin(), g.identifiers.end(),
                                             [&](const std::string& id) { return names.count(id) > 0; });
      });
      if (!validation) {
        validation = std::any_of(f->modifier_uses.begin(), f->modifier_uses.end(), [&](const ModifierUse& u) {
          return std::any_of(u.argument_identifiers.begin(), u.argument_identifiers.end(),
                             [&](const std::string& id) { return names.count(id) > 0; });
        });
      }
    }
    r.effect += effect ? 1 : 0;
    r.access += access ? 1 : 0;
    r.events += events ? 1 : 0;
    r.validation += validation ? 1 : 0;
  }
  const double n = static_cast<double>(matched.size());
  r.effect /= n;
  r.access /= n;
  r.events /= n;
  r.validation /= n;
  r.score = unit * (r.effect + r.access + r.events + r.validation);
  return r;
}

MetricResult score_m1_functional(const ContractSchema& schema, const ContractSurface& surface,
                                 const MetricConfig& config) {
  MetricResult out;
  const auto& expected = schema.conditions.function_names;
  const auto actual = scoring_function_names(surface);
  const auto matches = match_names(expected, actual, config);
  int exact = 0, semantic = 0;
  std::vector<const FunctionDecl*> matched;
  for (const auto& m : matches) {
    if (m.kind == MatchKind::Exact) ++exact;
    if (m.kind == MatchKind::Semantic) ++semantic;
    if (m.matched) matched.push_back(surface.find_function(*m.matched));
  }
  if (expected.empty()) {
    for (const auto& f : surface.functions)
      if (!f.is_special()) matched.push_back(&f);
  }
  const double names = name_component(static_cast<int>(expected.size()), exact, semantic, config);
  const auto q = score_q_impl(surface, matched, schema, config);
  out.score = clamp100(names + q.score);
  add_name_evidence(out.evidence, "function names", matches);

  Evidence impl{"implementation quality", {}, {}};
  for (const FunctionDecl* f : matched) {
    if (!f) continue;
    std::span<const FunctionDecl* const> one(&f, 1);
    const auto qf = score_q_impl(surface, one, schema, config);
    if (qf.score >= config.q_impl_points) {
      impl.matched.push_back(f->name);
      continue;
    }
    std::vector<std::string> gaps;
    if (qf.effect < 1) gaps.push_back("no effect");
    if (qf.access < 1) gaps.push_back("no access control");
    if (qf.events < 1) gaps.push_back("no event");
    if (qf.validation < 1) gaps.push_back("no input validation");
    std::string joined;
    for (const auto& g : gaps) joined += (joined.empty() ? "" : ", ") + g;
    impl.missed.push_back(f->name + " (" + joined + ")");
  }
  out.evidence.push_back(std::move(impl));

  out.components["m1.names"] = config.m1_name_points > 0 ? names / config.m1_name_points : 1.0;
  out.components["m1.q_impl"] = config.q_impl_points > 0 ? q.score / config.q_impl_points : 1.0;
  const bool any = !matched.empty();
  out.components["q_impl.effect"] = any ? q.effect : 0.0;
  out.components["q_impl.access"] = any ? q.access : 0.0;
  out.components["q_impl.events"] = any ? q.events : 0.0;
  out.components["q_impl.validation"] = any ? q.validation : 0.0;
  return out;
}

MetricResult score_m2_variables(const ContractSchema& schema, const ContractSurface& surface,
                                const MetricConfig& config) {
  MetricResult out;
  const auto& expected = schema.conditions.variable_names;
  std::vector<std::string> actual;
  for (const auto& v : surface.state_variables) actual.push_back(v.name);
  const auto matches = match_names(expected, actual, config);
  const double names = name_ratio(matches, config);

  Evidence usage{"variables in use", {}, {}};
  int considered = 0, used = 0;
  auto visit = [&](const StateVarDecl* v) {
    if (!v) return;
    ++considered;
    if (v->references > 0) {
      ++used;
      usage.matched.push_back(v->name);
    } else {
      usage.missed.push_back(v->name);
    }
  };
  if (expected.empty()) {
    for (const auto& v : surface.state_variables) visit(&v);
  } else {
    for (const auto& m : matches)
      if (m.matched) visit(surface.find_state_variable(*m.matched));
  }
  double usage_ratio;
  if (expected.empty()) usage_ratio = fraction(used, considered);
  else usage_ratio = considered == 0 ? 0.0 : static_cast<double>(used) / considered;

  out.score = clamp100(config.m2_name_points * names + config.m2_usage_points * usage_ratio);
  add_name_evidence(out.evidence, "state variables", matches);
  out.evidence.push_back(std::move(usage));
  out.components["m2.names"] = names;
  out.components["m2.usage"] = usage_ratio;
  return out;
}

MetricResult score_m3_state_machine(const ContractSchema& schema, const FsmSpec* fsm,
                                    const ContractSurface& surface, const MetricConfig& config) {
  MetricResult out;
  std::vector<std::string> expected_states;
  std::set<std::string> seen_states;
  auto add_state = [&](const std::string& s) {
    const auto t = text::trim(s);
    if (t.empty()) return;
    if (seen_states.insert(text::fold_identifier(t)).second) expected_states.push_back(t);
  };
  for (const auto& s : schema.conditions.state_names) add_state(s);
  if (fsm)
    for (const auto& s : fsm->states) add_state(s);

  struct Expected {
    std::string from, to;
  };
  std::vector<Expected> expected_transitions;
  std::set<std::pair<std::string, std::string>> seen_transitions;
  auto add_transition = [&](const std::string& from, const std::string& to) {
    const auto f = text::trim(from), t = text::trim(to);
    if (f.empty() || t.empty()) return;
    if (seen_transitions.emplace(text::fold_identifier(f), text::fold_identifier(t)).second)
      expected_transitions.push_back({f, t});
  };
  for (const auto& tr : schema.conditions.transitions) add_transition(tr.from_state, tr.to_state);
  if (fsm)
    for (const auto& tr : fsm->transitions) add_transition(tr.from, tr.to);

  const auto binding = bind_state_enum(surface);
  const EnumDecl* en = binding ? surface.find_enum(binding->enum_name) : nullptr;

  if (expected_states.empty() && !en) {
    out.score = 100;
    out.evidence.push_back({"state machine", {"none required"}, {}});
    out.components["m3.states"] = 1;
    out.components["m3.transitions"] = 1;
    out.components["m3.guards"] = 1;
    return out;
  }

  std::vector<std::string> members = en ? en->members : std::vector<std::string>{};
  const auto matches = match_names(expected_states, members, config);
  int state_hits = 0;
  std::map<std::string, std::string> member_of;  // folded expected name -> enum member
  for (const auto& m : matches) {
    if (!m.matched) continue;
    ++state_hits;
    member_of[text::fold_identifier(m.expected)] = *m.matched;
  }
  const double states = expected_states.empty() ? 1.0 : static_cast<double>(state_hits) / expected_states.size();
  add_name_evidence(out.evidence, "states", matches);

  // Functions that assign the state variable, with what they assign.
  struct Writer {
    const FunctionDecl* fn;
    std::vector<std::string> targets;
  };
  std::vector<Writer> writers;
  auto mentions_state = [&](const FunctionDecl& f, const std::string& what) {
    for (const auto& g : f.facts.guards)
      if (std::find(g.identifiers.begin(), g.identifiers.end(), what) != g.identifiers.end()) return true;
    for (const auto& use : f.modifier_uses) {
      if (std::find(use.argument_identifiers.begin(), use.argument_identifiers.end(), what) !=
          use.argument_identifiers.end())
        return true;
      if (const auto* mod = surface.find_modifier(use.name)) {
        for (const auto& g : mod->facts.guards)
          if (std::find(g.identifiers.begin(), g.identifiers.end(), what) != g.identifiers.end()) return true;
      }
    }
    return false;
  };
  if (binding) {
    for (const auto& f : surface.functions) {
      if (f.name == "constructor") continue;
      Writer w{&f, {}};
      for (const auto& wr : f.facts.writes) {
        if (wr.variable != binding->variable) continue;
        std::string target = wr.value;
        if (auto dot = target.rfind('.'); dot != std::string::npos) target = target.substr(dot + 1);
        w.targets.push_back(text::trim(target));
      }
      if (!w.targets.empty() || std::any_of(f.facts.writes.begin(), f.facts.writes.end(), [&](const StateWrite& x) {
            return x.variable == binding->variable;
          }))
        writers.push_back(std::move(w));
    }
  }

  Evidence trans_ev{"transitions", {}, {}};
  int trans_hits = 0;
  for (const auto& tr : expected_transitions) {
    const auto from_it = member_of.find(text::fold_identifier(tr.from));
    const auto to_it = member_of.find(text::fold_identifier(tr.to));
    bool found = false;
    if (from_it != member_of.end() && to_it != member_of.end()) {
      for (const auto& w : writers) {
        if (std::find(w.targets.begin(), w.targets.end(), to_it->second) == w.targets.end()) continue;
        const bool checks_from = mentions_state(*w.fn, from_it->second);
        const bool checks_state = mentions_state(*w.fn, binding->variable);
        if (checks_from || !checks_state) {
          found = true;
          break;
        }
      }
    }
    const std::string label = tr.from + " -> " + tr.to;
    if (found) {
      ++trans_hits;
      trans_ev.matched.push_back(label);
    } else {
      trans_ev.missed.push_back(label);
    }
  }
  const double transitions = expected_transitions.empty() ? 1.0
                                                          : static_cast<double>(trans_hits) / expected_transitions.size();
  out.evidence.push_back(std::move(trans_ev));

  Evidence guard_ev{"state guards", {}, {}};
  double guards;
  if (!binding) {
    guards = 0;
    guard_ev.missed.push_back("no state variable");
  } else {
    int guarded = 0;
    for (const auto& w : writers) {
      bool ok = mentions_state(*w.fn, binding->variable);
      if (!ok && en) {
        for (const auto& m : en->members) {
          if (mentions_state(*w.fn, m)) {
            ok = true;
            break;
          }
        }
      }
      if (ok) {
        ++guarded;
        guard_ev.matched.push_back(w.fn->name);
      } else {
        guard_ev.missed.push_back(w.fn->name);
      }
    }
    guards = fraction(guarded, static_cast<int>(writers.size()));
  }
  out.evidence.push_back(std::move(guard_ev));

  out.score = clamp100(config.m3_state_points * states + config.m3_transition_points * transitions +
                       config.m3_guard_points * guards);
  out.components["m3.states"] = states;
  out.components["m3.transitions"] = transitions;
  out.components["m3.guards"] = guards;
  return out;
}

MetricResult score_m4_business_logic(const ContractSchema& schema, const ContractSurface& surface,
                                     std::string_view source, const MetricConfig& config) {
  MetricResult out;
  const auto lexed = detail::lex(source);

  std::vector<std::string> action_names;
  for (const auto& f : surface.functions) {
    action_names.push_back(f.name);
    for (const auto& e : f.facts.emitted_events) action_names.push_back(e);
  }
  const auto action_tokens = identifier_tokens(action_names);

  std::set<std::string> source_tokens;
  std::set<std::string> source_numbers;
  for (const auto& t : lexed.tokens) {
    if (t.kind == detail::TokKind::Ident) {
      auto s = text::significant_tokens(t.text);
      source_tokens.insert(s.begin(), s.end());
    } else if (t.kind == detail::TokKind::Number) {
      source_numbers.insert(normalize_amount(t.text));
    } else if (t.kind == detail::TokKind::String) {
      auto s = text::significant_tokens(t.text);
      source_tokens.insert(s.begin(), s.end());
    }
  }

  const auto guards = all_guards(surface);

  Evidence obligations{"obligations", {}, {}};
  int ob_hits = 0;
  for (const auto& o : schema.obligations) {
    const bool hit = text::shares_token(text::significant_tokens(o.responsibility), action_tokens);
    (hit ? obligations.matched : obligations.missed).push_back(o.responsibility);
    ob_hits += hit;
  }

  Evidence financial{"financial terms", {}, {}};
  int fin_hits = 0;
  for (const auto& ft : schema.financial_terms) {
    const auto amount = normalize_amount(ft.amount);
    bool hit = !amount.empty() && source_numbers.count(amount) > 0;
    if (!hit) hit = text::shares_token(text::significant_tokens(ft.purpose), source_tokens);
    const std::string label = ft.purpose.empty() ? ft.amount : ft.purpose;
    (hit ? financial.matched : financial.missed).push_back(label);
    fin_hits += hit;
  }

  std::set<std::string> time_tokens;
  for (const Guard* g : guards) {
    if (!g->mentions_timestamp) continue;
    auto t = identifier_tokens(g->identifiers);
    time_tokens.insert(t.begin(), t.end());
  }
  for (const auto& v : surface.state_variables) {
    const auto parts = text::split_identifier(v.name);
    const bool timed = std::any_of(parts.begin(), parts.end(), [](const std::string& p) { return time_word(p) || time_word(text::stem(p)); });
    if (!timed) continue;
    auto t = text::significant_tokens(v.name);
    time_tokens.insert(t.begin(), t.end());
  }
  Evidence temporal{"temporal terms", {}, {}};
  int time_hits = 0;
  for (const auto& d : schema.dates) {
    const bool hit = !time_tokens.empty() &&
                     (text::shares_token(text::significant_tokens(d.label), time_tokens) ||
                      text::shares_token(text::significant_tokens(d.value), time_tokens));
    (hit ? temporal.matched : temporal.missed).push_back(d.label.empty() ? d.value : d.label);
    time_hits += hit;
  }

  std::set<std::string> condition_tokens;
  for (const Guard* g : guards) {
    auto t = text::significant_tokens(g->condition);
    condition_tokens.insert(t.begin(), t.end());
  }
  Evidence conditional{"conditions", {}, {}};
  int cond_hits = 0;
  for (const auto& c : schema.conditions.logic_conditions) {
    const bool hit = text::shares_token(text::significant_tokens(c), condition_tokens);
    (hit ? conditional.matched : conditional.missed).push_back(c);
    cond_hits += hit;
  }

  const double ob = fraction(ob_hits, static_cast<int>(schema.obligations.size()));
  const double fin = fraction(fin_hits, static_cast<int>(schema.financial_terms.size()));
  const double tim = fraction(time_hits, static_cast<int>(schema.dates.size()));
  const double con = fraction(cond_hits, static_cast<int>(schema.conditions.logic_conditions.size()));
  out.score = clamp100(config.m4_obligation_points * ob + config.m4_financial_points * fin +
                       config.m4_temporal_points * tim + config.m4_conditional_points * con);
  out.evidence = {std::move(obligations), std::move(financial), std::move(temporal), std::move(conditional)};
  out.components["m4.obligations"] = ob;
  out.components["m4.financial"] = fin;
  out.components["m4.temporal"] = tim;
  out.components["m4.conditional"] = con;
  return out;
}

MetricResult score_m5_code_quality(const ContractSurface& surface, std::span<const LintFinding> lint,
                                   const MetricConfig& config) {
  MetricResult out;
  double score = 100;
  Evidence findings{"forbidden patterns", {}, {}};
  for (const auto& f : lint) {
    score -= f.pattern == LintPattern::PlaceholderMarker ? config.m5_placeholder_penalty
                                                         : config.m5_pattern_penalty;
    findings.missed.push_back(std::string(to_string(f.pattern)) + " at line " + std::to_string(f.location));
  }
  if (lint.empty()) findings.matched.push_back("none found");

  Evidence messages{"error messages", {}, {}};
  bool unlabelled = false;
  for (const auto& f : surface.functions) {
    for (const auto& g : f.facts.guards) {
      if (g.kind == GuardKind::Require && !g.has_message) {
        unlabelled = true;
        messages.missed.push_back("require without message in " + f.name + " (line " + std::to_string(g.line) + ")");
      }
    }
  }
  for (const auto& m : surface.modifiers) {
    for (const auto& g : m.facts.guards) {
      if (g.kind == GuardKind::Require && !g.has_message) {
        unlabelled = true;
        messages.missed.push_back("require without message in modifier " + m.name + " (line " +
                                  std::to_string(g.line) + ")");
      }
    }
  }
  if (unlabelled) score -= config.m5_missing_message_penalty;
  else messages.matched.push_back("every require has a message");

  Evidence events{"events declared", {}, {}};
  if (surface.events.empty()) {
    score -= config.m5_no_events_penalty;
    events.missed.push_back("contract declares no events");
  } else {
    for (const auto& e : surface.events) events.matched.push_back(e.name);
  }

  out.score = clamp100(score);
  out.evidence = {std::move(findings), std::move(messages), std::move(events)};
  out.components["m5.quality"] = out.score / 100.0;
  return out;
}

Grade grade_for(double composite) {
  // Bands are half-open; the tolerance absorbs weighted-sum rounding only.
  constexpr double eps = 1e-9;
  if (composite >= 90 - eps) return Grade::A;
  if (composite >= 80 - eps) return Grade::B;
  if (composite >= 70 - eps) return Grade::C;
  if (composite >= 60 - eps) return Grade::D;
  return Grade::F;
}

double composite(const MetricScores& scores, const MetricConfig& config) {
  const auto values = scores.as_array();
  double total = 0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double v = values[i];
    if (!(v >= 0 && v <= 100)) {
      throw DomainError(std::string(kMetricNames[i]) + " score " + text::fixed(v, 4) + " is outside [0,100]");
    }
    total += config.weights[i] * v;
  }
  return total;
}

QualityReport report_from_scores(const MetricScores& scores, ScoreSource source, const MetricConfig& config) {
  QualityReport r;
  r.scores = scores;
  r.composite = composite(scores, config);
  r.grade = grade_for(r.composite);
  r.source_of_scores = source;
  return r;
}

QualityReport evaluate_quality(const ContractSchema& schema, const FsmSpec* fsm, const ContractSurface& surface,
                               std::string_view source, std::span<const LintFinding> lint,
                               const MetricConfig& config) {
  std::array<MetricResult, 5> parts = {
      score_m1_functional(schema, surface, config),
      score_m2_variables(schema, surface, config),
      score_m3_state_machine(schema, fsm, surface, config),
      score_m4_business_logic(schema, surface, source, config),
      score_m5_code_quality(surface, lint, config),
  };
  MetricScores scores = MetricScores::from_array(
      {parts[0].score, parts[1].score, parts[2].score, parts[3].score, parts[4].score});
  QualityReport r = report_from_scores(scores, ScoreSource::Deterministic, config);
  for (std::size_t i = 0; i < parts.size(); ++i) {
    r.evidence[i] = std::move(parts[i].evidence);
    r.components.insert(parts[i].components.begin(), parts[i].components.end());
  }
  return r;
}

QualityReport empty_quality_report() {
  QualityReport r;
  r.notes.push_back("no contract to score");
  return r;
}

}  // namespace solbench
