#include "solbench/surface.hpp"

#include <algorithm>
#include <array>
#include <functional>
#include <map>
#include <unordered_map>
#include <unordered_set>

#include "lexer.hpp"
#include "solbench/error.hpp"
#include "solbench/text.hpp"

namespace solbench {

using detail::Lexed;
using detail::TokKind;
using detail::Token;

std::string_view to_string(Visibility v) {
  switch (v) {
    case Visibility::Default: return "default";
    case Visibility::Public: return "public";
    case Visibility::Private: return "private";
    case Visibility::External: return "external";
    case Visibility::Internal: return "internal";
  }
  return "?";
}

std::string_view to_string(Mutability m) {
  switch (m) {
    case Mutability::None: return "none";
    case Mutability::View: return "view";
    case Mutability::Pure: return "pure";
    case Mutability::Payable: return "payable";
  }
  return "?";
}

std::string_view to_string(UnitKind k) {
  switch (k) {
    case UnitKind::Contract: return "contract";
    case UnitKind::AbstractContract: return "abstract contract";
    case UnitKind::Interface: return "interface";
    case UnitKind::Library: return "library";
  }
  return "?";
}

const FunctionDecl* ContractSurface::find_function(std::string_view name) const {
  for (const auto& f : functions)
    if (f.name == name) return &f;
  return nullptr;
}

const StateVarDecl* ContractSurface::find_state_variable(std::string_view name) const {
  for (const auto& v : state_variables)
    if (v.name == name) return &v;
  return nullptr;
}

const EnumDecl* ContractSurface::find_enum(std::string_view name) const {
  for (const auto& e : enums)
    if (e.name == name) return &e;
  for (const auto& e : file_enums)
    if (e.name == name) return &e;
  return nullptr;
}

const ModifierDecl* ContractSurface::find_modifier(std::string_view name) const {
  for (const auto& m : modifiers)
    if (m.name == name) return &m;
  for (const auto& m : file_modifiers)
    if (m.name == name) return &m;
  return nullptr;
}

namespace {

constexpr std::array<std::string_view, 5> kLowLevel = {"call", "delegatecall", "staticcall",
                                                       "send", "callcode"};
constexpr std::array<std::string_view, 11> kAssignOps = {"=",  "+=", "-=", "*=",  "/=",  "%=",
                                                         "|=", "&=", "^=", "<<=", ">>="};
constexpr std::array<std::string_view, 10> kArithmetic = {"+", "-", "*", "/", "%",
                                                          "+=", "-=", "*=", "/=", "**"};

template <std::size_t N>
bool one_of(std::string_view s, const std::array<std::string_view, N>& set) {
  return std::find(set.begin(), set.end(), s) != set.end();
}

bool is_elementary_type(std::string_view t) {
  static const std::unordered_set<std::string_view> kFixed = {
      "address", "bool", "string", "bytes", "byte", "uint", "int", "fixed", "ufixed", "mapping", "var"};
  if (kFixed.count(t)) return true;
  auto numbered = [&](std::string_view prefix) {
    if (!t.starts_with(prefix) || t.size() == prefix.size()) return false;
    return std::all_of(t.begin() + static_cast<long>(prefix.size()), t.end(),
                       [](char c) { return std::isdigit(static_cast<unsigned char>(c)) || c == 'x'; });
  };
  return numbered("uint") || numbered("int") || numbered("bytes") || numbered("fixed") ||
         numbered("ufixed");
}

bool is_data_location(std::string_view s) {
  return s == "memory" || s == "storage" || s == "calldata";
}

bool is_keyword(std::string_view s) {
  static const std::unordered_set<std::string_view> kWords = {
      "if",       "else",     "for",      "while",    "do",        "return",   "returns",
      "emit",     "require",  "assert",   "revert",   "throw",     "new",      "delete",
      "function", "modifier", "event",    "struct",   "enum",      "mapping",  "public",
      "private",  "internal", "external", "view",     "pure",      "payable",  "constant",
      "memory",   "storage",  "calldata", "try",      "catch",     "assembly", "unchecked",
      "break",    "continue", "true",     "false",    "immutable", "override", "virtual",
      "indexed",  "anonymous", "using",   "is",       "contract",  "library",  "interface",
      "constructor", "fallback", "receive", "import", "pragma",    "type",     "error"};
  return kWords.count(s) > 0;
}

/// Joins tokens into readable type/expression text: spaces only between
/// adjacent words and around `=>`.
std::string join_tokens(const std::vector<Token>& toks, std::size_t b, std::size_t e) {
  std::string out;
  e = std::min(e, toks.size());
  for (std::size_t i = b; i < e; ++i) {
    const auto& t = toks[i];
    if (!out.empty()) {
      const auto& prev = toks[i - 1];
      const bool word_prev = prev.kind == TokKind::Ident || prev.kind == TokKind::Number ||
                             prev.kind == TokKind::String;
      const bool word_cur =
          t.kind == TokKind::Ident || t.kind == TokKind::Number || t.kind == TokKind::String;
      if ((word_prev && word_cur) || t.text == "=>" || prev.text == "=>" ||
          (prev.kind == TokKind::Punct && prev.text == "," )) {
        out.push_back(' ');
      } else if (t.kind == TokKind::Punct && t.text.size() <= 3 && t.text != "." && t.text != "(" &&
                 t.text != ")" && t.text != "[" && t.text != "]" && t.text != "," &&
                 t.text != ";" && t.text != "++" && t.text != "--" && t.text != "!") {
        out.push_back(' ');
      } else if (prev.kind == TokKind::Punct && prev.text.size() <= 3 && prev.text != "." &&
                 prev.text != "(" && prev.text != "[" && prev.text != "!" && prev.text != "++" &&
                 prev.text != "--" && prev.text != ")" && prev.text != "]" && t.text != ")" &&
                 t.text != "]" && t.text != ";" && t.text != ",") {
        out.push_back(' ');
      }
    }
    out.append(t.text);
  }
  return out;
}

struct RawFunction {
  FunctionDecl decl;
  std::size_t body_begin = 0;
  std::size_t body_end = 0;
};

struct RawModifier {
  ModifierDecl decl;
  std::size_t body_begin = 0;
  std::size_t body_end = 0;
};

struct RawUnit {
  std::string name;
  UnitKind kind = UnitKind::Contract;
  int line = 0;
  int end_line = 0;
  std::vector<std::string> bases;
  std::size_t begin = 0;  // index of `{`
  std::size_t end = 0;    // index of matching `}`
  std::vector<RawFunction> functions;
  std::vector<RawModifier> modifiers;
  std::vector<StateVarDecl> state_vars;
  std::vector<std::size_t> state_var_name_tokens;
  std::vector<EnumDecl> enums;
  std::vector<EventDecl> events;
  std::vector<StructDecl> structs;
};

/// Knowledge about declared names used while analysing bodies.
struct TypeContext {
  std::unordered_set<std::string> contract_like;
  std::unordered_set<std::string> non_contract;  // libraries, structs, enums, UDVTs
  std::unordered_set<std::string> event_names;
  std::unordered_map<std::string, std::string> state_types;

  bool is_contract_type(std::string_view type) const {
    std::string base(type);
    if (auto p = base.find_first_of("[( "); p != std::string::npos) base.resize(p);
    if (auto p = base.rfind('.'); p != std::string::npos) base = base.substr(p + 1);
    if (base.empty() || is_elementary_type(base)) return false;
    if (contract_like.count(base)) return true;
    if (non_contract.count(base)) return false;
    return std::isupper(static_cast<unsigned char>(base[0])) != 0;
  }
};

class Parser {
 public:
  explicit Parser(std::string_view source) : src_(source), lx_(detail::lex(source)), t_(lx_.tokens) {}

  ParseResult run();

 private:
  std::string_view src_;
  Lexed lx_;
  const std::vector<Token>& t_;
  std::vector<ParseWarning> warnings_;
  std::vector<RawUnit> units_;
  std::vector<std::string> pragmas_;
  std::vector<EnumDecl> file_enums_;
  std::vector<StructDecl> file_structs_;
  std::vector<EventDecl> file_events_;
  std::unordered_set<std::string> udvts_;

  std::size_t size() const { return t_.size(); }
  bool is(std::size_t i, std::string_view text) const { return i < size() && t_[i].text == text; }
  bool is_punct(std::size_t i, std::string_view text) const {
    return i < size() && t_[i].kind == TokKind::Punct && t_[i].text == text;
  }
  bool is_ident(std::size_t i) const { return i < size() && t_[i].kind == TokKind::Ident; }
  int line_at(std::size_t i) const {
    if (i < size()) return t_[i].line;
    return t_.empty() ? 1 : t_.back().line;
  }
  std::size_t partner(std::size_t i) const { return i < size() ? lx_.partner[i] : size(); }

  void warn(std::size_t i, std::string msg) { warnings_.push_back({line_at(i), std::move(msg)}); }

  /// Index of the `;` ending the declaration that starts at `i`, skipping
  /// bracketed groups; stops before `stop` (exclusive).
  std::size_t find_semicolon(std::size_t i, std::size_t stop) const {
    while (i < stop) {
      const auto& tok = t_[i];
      if (tok.kind == TokKind::Punct) {
        if (tok.text == ";") return i;
        if (tok.text == "(" || tok.text == "[" || tok.text == "{") {
          const auto p = partner(i);
          if (p >= stop) return stop;
          i = p + 1;
          continue;
        }
        if (tok.text == "}") return stop;
      }
      ++i;
    }
    return stop;
  }

  /// `function (...) ... name;` declares a variable of function type.
  bool is_function_type_var(std::size_t i, std::size_t stop) const {
    if (!is(i, "function") || !is_punct(i + 1, "(")) return false;
    static const std::unordered_set<std::string_view> attrs = {
        "public", "private", "internal", "external", "pure", "view", "payable", "constant", "returns",
        "virtual", "override"};
    std::size_t last = size();
    for (std::size_t k = i + 1; k < stop; ++k) {
      if (is_punct(k, "{")) return false;
      if (is_punct(k, ";") || is_punct(k, "=")) break;
      if (is_punct(k, "(")) {
        k = partner(k);
        continue;
      }
      if (is_ident(k)) last = k;
    }
    return last < size() && !attrs.count(t_[last].text);
  }

  std::size_t parse_unit(std::size_t i, UnitKind kind);
  std::size_t parse_function(std::size_t i, std::size_t stop, RawUnit* unit);
  std::size_t parse_modifier(std::size_t i, std::size_t stop, RawUnit& unit);
  std::size_t parse_event(std::size_t i, std::size_t stop, std::vector<EventDecl>& out);
  std::size_t parse_enum(std::size_t i, std::size_t stop, std::vector<EnumDecl>& out);
  std::size_t parse_struct(std::size_t i, std::size_t stop, std::vector<StructDecl>& out);
  std::size_t parse_state_var(std::size_t i, std::size_t stop, RawUnit& unit);
  std::vector<Param> parse_params(std::size_t b, std::size_t e) const;
  Param parse_param(std::size_t b, std::size_t e) const;

  void analyze(std::size_t b, std::size_t e, const TypeContext& ctx,
               const std::unordered_map<std::string, std::string>& param_types, BodyFacts& facts,
               BodyStats& stats) const;
};

Param Parser::parse_param(std::size_t b, std::size_t e) const {
  Param p;
  std::vector<std::size_t> keep;
  for (std::size_t i = b; i < e; ++i) {
    const auto& tok = t_[i];
    if (tok.kind == TokKind::Ident && tok.text == "indexed") {
      p.indexed = true;
      continue;
    }
    if (tok.kind == TokKind::Ident && is_data_location(tok.text)) continue;
    keep.push_back(i);
  }
  if (keep.empty()) return p;
  std::size_t type_end = keep.size();
  const auto& last = t_[keep.back()];
  const bool address_payable = last.text == "payable" && keep.size() >= 2 && t_[keep[keep.size() - 2]].text == "address";
  if (keep.size() >= 2 && last.kind == TokKind::Ident && !address_payable &&
      t_[keep[keep.size() - 2]].text != "." && t_[keep[keep.size() - 2]].text != "mapping") {
    p.name = std::string(last.text);
    type_end = keep.size() - 1;
  }
  std::vector<Token> type_toks;
  for (std::size_t k = 0; k < type_end; ++k) type_toks.push_back(t_[keep[k]]);
  p.type = join_tokens(type_toks, 0, type_toks.size());
  return p;
}

std::vector<Param> Parser::parse_params(std::size_t b, std::size_t e) const {
  std::vector<Param> out;
  std::size_t start = b;
  for (std::size_t i = b; i <= e && i <= size(); ++i) {
    if (i == e || is_punct(i, ",")) {
      if (i > start) out.push_back(parse_param(start, i));
      start = i + 1;
      continue;
    }
    if (i < size() && t_[i].kind == TokKind::Punct && (t_[i].text == "(" || t_[i].text == "[")) {
      const auto p = partner(i);
      if (p < e) i = p;
    }
  }
  return out;
}

std::size_t Parser::parse_event(std::size_t i, std::size_t stop, std::vector<EventDecl>& out) {
  const auto semi = find_semicolon(i, stop);
  EventDecl ev;
  ev.line = line_at(i);
  if (!is_ident(i + 1)) {
    warn(i, "event without a name");
    return semi + 1;
  }
  ev.name = std::string(t_[i + 1].text);
  if (is_punct(i + 2, "(")) {
    const auto close = partner(i + 2);
    if (close < semi) {
      ev.params = parse_params(i + 3, close);
      ev.anonymous = is(close + 1, "anonymous");
    }
  }
  const auto indexed = std::count_if(ev.params.begin(), ev.params.end(), [](const Param& p) { return p.indexed; });
  if (indexed > 3 && !ev.anonymous) warn(i, "event " + ev.name + " has more than three indexed parameters");
  out.push_back(std::move(ev));
  return semi + 1;
}

std::size_t Parser::parse_enum(std::size_t i, std::size_t stop, std::vector<EnumDecl>& out) {
  EnumDecl en;
  en.line = line_at(i);
  if (!is_ident(i + 1) || !is_punct(i + 2, "{")) {
    warn(i, "malformed enum declaration");
    return find_semicolon(i, stop) + 1;
  }
  en.name = std::string(t_[i + 1].text);
  const auto close = std::min(partner(i + 2), stop);
  for (std::size_t k = i + 3; k < close; ++k) {
    if (t_[k].kind == TokKind::Ident) en.members.emplace_back(t_[k].text);
  }
  if (en.members.empty()) warn(i, "enum " + en.name + " has no members");
  std::vector<std::string> sorted = en.members;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    warn(i, "enum " + en.name + " has duplicate members");
  out.push_back(std::move(en));
  return close + 1;
}

std::size_t Parser::parse_struct(std::size_t i, std::size_t stop, std::vector<StructDecl>& out) {
  StructDecl st;
  st.line = line_at(i);
  if (!is_ident(i + 1) || !is_punct(i + 2, "{")) {
    warn(i, "malformed struct declaration");
    return find_semicolon(i, stop) + 1;
  }
  st.name = std::string(t_[i + 1].text);
  const auto close = std::min(partner(i + 2), stop);
  std::size_t k = i + 3;
  while (k < close) {
    const auto semi = find_semicolon(k, close);
    if (semi > k) st.members.push_back(parse_param(k, semi));
    k = semi + 1;
  }
  out.push_back(std::move(st));
  return close + 1;
}

std::size_t Parser::parse_function(std::size_t i, std::size_t stop, RawUnit* unit) {
  RawFunction raw;
  auto& fn = raw.decl;
  fn.line = line_at(i);
  const auto kw = t_[i].text;
  std::size_t k = i + 1;
  if (kw == "function") {
    if (is_ident(k) && !is_punct(k, "(")) {
      fn.name = std::string(t_[k].text);
      ++k;
    } else {
      fn.name = "fallback";
    }
  } else {
    fn.name = std::string(kw);
  }
  if (unit && unit->kind != UnitKind::Interface && unit->kind != UnitKind::Library && fn.name == unit->name) {
    fn.name = "constructor";
  }
  if (!is_punct(k, "(")) {
    warn(i, "function " + fn.name + " without a parameter list");
    return find_semicolon(i, stop) + 1;
  }
  const auto close = partner(k);
  if (close >= stop) {
    warn(i, "unterminated parameter list");
    return stop;
  }
  fn.params = parse_params(k + 1, close);
  k = close + 1;
  const std::unordered_set<std::string_view> base_names =
      unit ? std::unordered_set<std::string_view>(unit->bases.begin(), unit->bases.end())
           : std::unordered_set<std::string_view>{};
  while (k < stop && !is_punct(k, "{") && !is_punct(k, ";")) {
    const auto& tok = t_[k];
    if (tok.kind != TokKind::Ident) {
      if (is_punct(k, "}")) break;
      ++k;
      continue;
    }
    const auto w = tok.text;
    if (w == "public") fn.visibility = Visibility::Public;
    else if (w == "private") fn.visibility = Visibility::Private;
    else if (w == "external") fn.visibility = Visibility::External;
    else if (w == "internal") fn.visibility = Visibility::Internal;
    else if (w == "view" || w == "constant") fn.mutability = Mutability::View;
    else if (w == "pure") fn.mutability = Mutability::Pure;
    else if (w == "payable") fn.mutability = Mutability::Payable;
    else if (w == "virtual") fn.is_virtual = true;
    else if (w == "override") {
      if (is_punct(k + 1, "(")) {
        k = std::min(partner(k + 1), stop);
      }
    } else if (w == "returns") {
      if (is_punct(k + 1, "(")) {
        const auto rc = std::min(partner(k + 1), stop);
        fn.return_params = parse_params(k + 2, rc);
        for (const auto& p : fn.return_params) fn.returns.push_back(p.type);
        k = rc;
      }
    } else {
      // Modifier invocation, possibly qualified, possibly with arguments.
      std::string name(w);
      while (is_punct(k + 1, ".") && is_ident(k + 2)) {
        name = std::string(t_[k + 2].text);
        k += 2;
      }
      ModifierUse use{name, {}, {}};
      if (is_punct(k + 1, "(")) {
        const auto ac = std::min(partner(k + 1), stop);
        use.arguments = join_tokens(t_, k + 2, ac);
        for (auto a = k + 2; a < ac; ++a)
          if (t_[a].kind == TokKind::Ident) use.argument_identifiers.emplace_back(t_[a].text);
        k = ac;
      }
      if (!base_names.count(use.name)) {
        fn.modifiers.push_back(use.name);
        fn.modifier_uses.push_back(std::move(use));
      }
    }
    ++k;
  }
  if (is_punct(k, "{")) {
    const auto body_close = partner(k);
    if (body_close >= stop) {
      warn(k, "unterminated body of " + fn.name);
      raw.body_begin = k + 1;
      raw.body_end = stop;
      fn.body_present = true;
      fn.end_line = line_at(stop);
      if (unit) unit->functions.push_back(std::move(raw));
      return stop;
    }
    fn.body_present = true;
    raw.body_begin = k + 1;
    raw.body_end = body_close;
    fn.end_line = line_at(body_close);
    k = body_close + 1;
  } else {
    fn.end_line = line_at(k);
    k = k + 1;
  }
  if (unit) unit->functions.push_back(std::move(raw));
  return k;
}

std::size_t Parser::parse_modifier(std::size_t i, std::size_t stop, RawUnit& unit) {
  RawModifier raw;
  raw.decl.line = line_at(i);
  if (!is_ident(i + 1)) {
    warn(i, "modifier without a name");
    return find_semicolon(i, stop) + 1;
  }
  raw.decl.name = std::string(t_[i + 1].text);
  std::size_t k = i + 2;
  if (is_punct(k, "(")) {
    const auto close = std::min(partner(k), stop);
    raw.decl.params = parse_params(k + 1, close);
    k = close + 1;
  }
  while (k < stop && !is_punct(k, "{") && !is_punct(k, ";")) {
    if (is_punct(k, "(")) k = std::min(partner(k), stop);
    ++k;
  }
  if (is_punct(k, "{")) {
    const auto close = std::min(partner(k), stop);
    raw.decl.body_present = true;
    raw.body_begin = k + 1;
    raw.body_end = close;
    k = close + 1;
  } else {
    ++k;
  }
  unit.modifiers.push_back(std::move(raw));
  return k;
}

std::size_t Parser::parse_state_var(std::size_t i, std::size_t stop, RawUnit& unit) {
  const auto semi = find_semicolon(i, stop);
  // Declaration part ends at a top-level `=`.
  std::size_t decl_end = semi;
  for (std::size_t k = i; k < semi; ++k) {
    if (t_[k].kind == TokKind::Punct && (t_[k].text == "(" || t_[k].text == "[" || t_[k].text == "{")) {
      k = std::min(partner(k), semi);
      continue;
    }
    if (is_punct(k, "=")) {
      decl_end = k;
      break;
    }
  }
  StateVarDecl v;
  v.line = line_at(i);
  std::size_t k = i;
  std::size_t type_end = i;
  if (is(k, "mapping") && is_punct(k + 1, "(")) {
    type_end = std::min(partner(k + 1), decl_end) + 1;
  } else if (is_ident(k)) {
    type_end = k + 1;
    while (is_punct(type_end, ".") && is_ident(type_end + 1)) type_end += 2;
    if (t_[k].text == "address" && is(type_end, "payable")) ++type_end;
    if (t_[k].text == "function" && is_punct(type_end, "(")) type_end = partner(type_end) + 1;
  }
  while (type_end < decl_end && is_punct(type_end, "[")) type_end = std::min(partner(type_end), decl_end) + 1;
  if (type_end <= i || type_end > decl_end) {
    warn(i, "unrecognized declaration skipped");
    return semi + 1;
  }
  v.type = join_tokens(t_, i, type_end);
  std::size_t name_tok = size();
  for (k = type_end; k < decl_end; ++k) {
    const auto& tok = t_[k];
    if (tok.kind != TokKind::Ident) {
      if (is_punct(k, "(")) k = std::min(partner(k), decl_end);
      continue;
    }
    const auto w = tok.text;
    if (w == "public") v.visibility = Visibility::Public;
    else if (w == "private") v.visibility = Visibility::Private;
    else if (w == "internal") v.visibility = Visibility::Internal;
    else if (w == "constant") v.is_constant = true;
    else if (w == "immutable") v.is_immutable = true;
    else if (w == "override" || w == "transient" || w == "external" || w == "view" || w == "pure" ||
             w == "payable" || w == "returns")
      continue;
    else name_tok = k;
  }
  if (name_tok >= size()) {
    warn(i, "declaration without a name skipped");
    return semi + 1;
  }
  v.name = std::string(t_[name_tok].text);
  unit.state_vars.push_back(std::move(v));
  unit.state_var_name_tokens.push_back(name_tok);
  return semi + 1;
}

std::size_t Parser::parse_unit(std::size_t i, UnitKind kind) {
  RawUnit unit;
  unit.kind = kind;
  unit.line = line_at(i);
  std::size_t k = i + 1;
  if (!is_ident(k)) {
    warn(i, "unit without a name");
    return k;
  }
  unit.name = std::string(t_[k].text);
  ++k;
  if (is(k, "is")) {
    ++k;
    bool expect_name = true;
    while (k < size() && !is_punct(k, "{")) {
      if (is_punct(k, ",")) expect_name = true;
      else if (is_punct(k, "(")) k = partner(k);
      else if (is_ident(k) && expect_name) {
        std::string base(t_[k].text);
        while (is_punct(k + 1, ".") && is_ident(k + 2)) {
          base = std::string(t_[k + 2].text);
          k += 2;
        }
        unit.bases.push_back(base);
        expect_name = false;
      }
      ++k;
    }
  }
  while (k < size() && !is_punct(k, "{")) {
    if (is_punct(k, ";")) {
      warn(k, "unit " + unit.name + " without a body");
      return k + 1;
    }
    ++k;
  }
  if (k >= size()) {
    warn(i, "unit " + unit.name + " without a body");
    return k;
  }
  unit.begin = k;
  unit.end = partner(k);
  if (unit.end >= size()) warn(k, "unterminated body of " + unit.name);
  unit.end_line = line_at(unit.end);
  const std::size_t stop = std::min(unit.end, size());
  k = unit.begin + 1;
  while (k < stop) {
    const auto& tok = t_[k];
    if (tok.kind == TokKind::Punct) {
      if (tok.text == "{" || tok.text == "(" || tok.text == "[") {
        warn(k, "unexpected group in " + unit.name);
        k = std::min(partner(k), stop) + 1;
      } else {
        ++k;
      }
      continue;
    }
    const auto w = tok.text;
    std::size_t next;
    if ((w == "function" && !is_function_type_var(k, stop)) || w == "constructor" ||
        ((w == "fallback" || w == "receive") && is_punct(k + 1, "("))) {
      next = parse_function(k, stop, &unit);
    } else if (w == "modifier") {
      next = parse_modifier(k, stop, unit);
    } else if (w == "event") {
      next = parse_event(k, stop, unit.events);
    } else if (w == "enum") {
      next = parse_enum(k, stop, unit.enums);
    } else if (w == "struct") {
      next = parse_struct(k, stop, unit.structs);
    } else if (w == "using" || w == "error" || w == "pragma" || w == "import") {
      next = find_semicolon(k, stop) + 1;
    } else if (w == "type" && is_ident(k + 1) && is(k + 2, "is")) {
      udvts_.insert(std::string(t_[k + 1].text));
      next = find_semicolon(k, stop) + 1;
    } else if (tok.kind == TokKind::Ident) {
      next = parse_state_var(k, stop, unit);
    } else {
      warn(k, "unexpected token skipped");
      next = k + 1;
    }
    k = std::max(next, k + 1);
  }
  units_.push_back(std::move(unit));
  return stop + 1;
}

void Parser::analyze(std::size_t b, std::size_t e, const TypeContext& ctx,
                     const std::unordered_map<std::string, std::string>& param_types, BodyFacts& facts,
                     BodyStats& stats) const {
  e = std::min(e, size());
  std::unordered_map<std::string, std::string> locals = param_types;
  // Storage pointers to state variables: writes through them are state writes.
  std::unordered_map<std::string, std::string> aliases;
  std::vector<std::pair<std::size_t, std::size_t>> loops;
  int paren = 0;

  auto type_of = [&](std::string_view name) -> std::string {
    const std::string key(name);
    if (auto it = locals.find(key); it != locals.end()) return it->second;
    if (auto it = ctx.state_types.find(key); it != ctx.state_types.end()) return it->second;
    return {};
  };
  auto element_type = [](std::string type) {
    if (type.starts_with("mapping")) {
      auto arrow = type.rfind("=>");
      if (arrow == std::string::npos) return std::string{};
      type = text::trim(type.substr(arrow + 2));
      while (!type.empty() && type.back() == ')') type.pop_back();
      return text::trim(type);
    }
    if (auto br = type.rfind('['); br != std::string::npos) return type.substr(0, br);
    return type;
  };
  auto in_loop = [&](std::size_t pos) {
    return std::any_of(loops.begin(), loops.end(), [&](const auto& r) { return pos > r.first && pos < r.second; });
  };
  /// End of the statement following position `i` (a `{` block or up to `;`).
  auto statement_end = [&](std::size_t i) {
    if (is_punct(i, "{")) return std::min(partner(i), e);
    std::size_t k = i;
    while (k < e && !is_punct(k, ";")) {
      if (t_[k].kind == TokKind::Punct && (t_[k].text == "(" || t_[k].text == "[" || t_[k].text == "{")) {
        k = std::min(partner(k), e);
      }
      ++k;
    }
    return k;
  };
  /// Whether the value of the expression ending near `dot` is consumed.
  auto result_used = [&](std::size_t dot) {
    std::size_t k = dot;
    while (k > b) {
      --k;
      const auto& tok = t_[k];
      if (tok.kind != TokKind::Punct) continue;
      if (tok.text == ")" || tok.text == "]") {
        const auto o = partner(k);
        if (o < k) k = o;
        continue;
      }
      if (tok.text == "(" || tok.text == "[" || tok.text == ",") return true;
      if (tok.text == ";" || tok.text == "{" || tok.text == "}") break;
      if (one_of(tok.text, kAssignOps) || tok.text == "==" || tok.text == "!=" || tok.text == "!" ||
          tok.text == "&&" || tok.text == "||")
        return true;
    }
    const std::size_t start = k == b && !is_punct(k, ";") && !is_punct(k, "{") && !is_punct(k, "}") ? b : k + 1;
    if (start < size() && t_[start].kind == TokKind::Ident) {
      const auto w = t_[start].text;
      if (w == "return" || w == "require" || w == "assert" || w == "if" || w == "while" || w == "bool")
        return true;
    }
    return false;
  };
  auto add_guard = [&](GuardKind kind, std::size_t cb, std::size_t ce, bool has_message, std::size_t at) {
    Guard g;
    g.kind = kind;
    g.line = line_at(at);
    g.has_message = has_message;
    g.condition = join_tokens(t_, cb, ce);
    for (std::size_t k = cb; k < ce && k < e; ++k) {
      if (t_[k].kind != TokKind::Ident) continue;
      g.identifiers.emplace_back(t_[k].text);
      if (t_[k].text == "msg" && is_punct(k + 1, ".") && is(k + 2, "sender")) g.mentions_sender = true;
      if (t_[k].text == "tx" && is_punct(k + 1, ".") && is(k + 2, "origin")) g.mentions_sender = true;
      if ((t_[k].text == "block" && is_punct(k + 1, ".") && is(k + 2, "timestamp")) ||
          (t_[k].text == "now" && !is_punct(k - 1, ".")))
        g.mentions_timestamp = true;
    }
    facts.guards.push_back(std::move(g));
    return facts.guards.size() - 1;
  };

  for (std::size_t i = b; i < e; ++i) {
    const auto& tok = t_[i];
    const bool after_dot = i > b && is_punct(i - 1, ".");
    if (tok.kind == TokKind::Punct) {
      const auto p = tok.text;
      if (p == "(") ++paren;
      else if (p == ")") paren = std::max(0, paren - 1);
      else if (p == ";" && paren == 0) ++stats.statement_count;
      else if (one_of(p, kArithmetic) || p == "++" || p == "--") facts.has_arithmetic = true;

      if (p == "." && is_ident(i + 1)) {
        const auto member = t_[i + 1].text;
        const bool call_follows = is_punct(i + 2, "(") || is_punct(i + 2, "{") ||
                                  (is_punct(i + 2, ".") && (is(i + 3, "value") || is(i + 3, "gas")));
        if (!call_follows) continue;
        std::optional<CallKind> kind;
        if (one_of(member, kLowLevel)) {
          kind = CallKind::LowLevel;
        } else if (i > b) {
          const auto prev = i - 1;
          if (is_ident(prev) && !(prev > b && is_punct(prev - 1, "."))) {
            const auto base = t_[prev].text;
            if (base != "msg" && base != "block" && base != "tx" && base != "abi" && base != "this" &&
                base != "super" && ctx.is_contract_type(type_of(base))) {
              kind = CallKind::Member;
            }
          } else if (is_punct(prev, ")")) {
            const auto open = partner(prev);
            if (open < prev && open > b && is_ident(open - 1) && ctx.is_contract_type(t_[open - 1].text))
              kind = CallKind::Member;
          } else if (is_punct(prev, "]")) {
            const auto open = partner(prev);
            if (open < prev && open > b && is_ident(open - 1) &&
                ctx.is_contract_type(element_type(type_of(t_[open - 1].text))))
              kind = CallKind::Member;
          }
        }
        if (!kind && member == "transfer" && is_punct(i + 2, "(")) kind = CallKind::EtherTransfer;
        if (kind) {
          ExternalCall call;
          call.kind = *kind;
          call.member = std::string(member);
          call.line = line_at(i);
          call.position = i;
          call.in_loop = in_loop(i);
          call.return_used = *kind != CallKind::LowLevel || result_used(i);
          facts.calls.push_back(std::move(call));
          ++stats.external_call_count;
        }
      }
      continue;
    }
    if (tok.kind != TokKind::Ident) continue;
    const auto w = tok.text;
    facts.identifiers.insert(std::string(w));

    if (after_dot) continue;

    if (w == "assembly") {
      ++stats.statement_count;
      std::size_t k = i + 1;
      while (k < e && !is_punct(k, "{")) ++k;
      if (k < e) i = std::min(partner(k), e);
      continue;
    }
    if (w == "if" && is_punct(i + 1, "(")) {
      ++stats.statement_count;
      const auto close = std::min(partner(i + 1), e);
      const auto g = add_guard(GuardKind::If, i + 2, close, false, i);
      const auto j = close + 1;
      const auto body = is_punct(j, "{") ? j + 1 : j;
      if (is(body, "revert") || is(body, "throw")) {
        facts.guards[g].reverts = true;
        facts.guards[g].has_message = is_punct(body + 1, "(") ? !is_punct(body + 2, ")") : is_ident(body + 1);
      }
      const bool bare_return = is(body, "return") && is_punct(body + 1, ";");
      if (bare_return) {
        const auto after = body == j ? body + 2 : (is_punct(body + 2, "}") ? body + 3 : size());
        if (after < size() + 1 && !is(after, "else") && (body == j || is_punct(body + 2, "}"))) {
          facts.silent_returns.push_back(line_at(i));
        }
      }
      continue;
    }
    if ((w == "for" || w == "while") && is_punct(i + 1, "(")) {
      const auto close = std::min(partner(i + 1), e);
      // `while` closing a do-while is not a new loop.
      bool do_tail = false;
      if (w == "while" && i > b && is_punct(i - 1, "}")) {
        const auto open = partner(i - 1);
        do_tail = open < i && open > b && is(open - 1, "do");
      }
      if (!do_tail) {
        ++stats.loop_count;
        ++stats.statement_count;
        loops.emplace_back(close, statement_end(close + 1));
      }
      continue;
    }
    if (w == "do") {
      ++stats.loop_count;
      ++stats.statement_count;
      loops.emplace_back(i, statement_end(i + 1));
      continue;
    }
    if ((w == "require" || w == "assert") && is_punct(i + 1, "(")) {
      ++stats.require_count;
      const auto close = std::min(partner(i + 1), e);
      std::size_t comma = close;
      for (std::size_t k = i + 2; k < close; ++k) {
        if (t_[k].kind == TokKind::Punct && (t_[k].text == "(" || t_[k].text == "[" || t_[k].text == "{")) {
          k = std::min(partner(k), close);
          continue;
        }
        if (is_punct(k, ",")) {
          comma = k;
          break;
        }
      }
      add_guard(w == "require" ? GuardKind::Require : GuardKind::Assert, i + 2, comma, comma < close, i);
      continue;
    }
    if (w == "revert" || w == "throw") {
      ++stats.require_count;
      const bool message = (is_punct(i + 1, "(") && !is_punct(i + 2, ")")) || is_ident(i + 1);
      add_guard(GuardKind::Revert, i, i, message, i);
      continue;
    }
    if (w == "emit" && is_ident(i + 1)) {
      std::size_t k = i + 1;
      while (is_punct(k + 1, ".") && is_ident(k + 2)) k += 2;
      facts.emitted_events.emplace_back(t_[k].text);
      ++stats.emit_count;
      i = k;
      continue;
    }
    if (w == "return") {
      if (!is_punct(i + 1, ";")) facts.returns_value = true;
      continue;
    }
    if ((w == "block" && is_punct(i + 1, ".") && is(i + 2, "timestamp")) || w == "now") {
      stats.reads_block_timestamp = true;
    }
    // Locals: `Type [location] name` followed by `=`, `;`, `,` or `)`.
    if (!is_keyword(w) && i + 1 < e) {
      std::size_t k = i + 1;
      while (is_punct(k, "[")) k = std::min(partner(k), e) + 1;
      if (is(k, "payable") && w == "address") ++k;
      const bool storage = is(k, "storage");
      if (k < e && is_data_location(t_[k].text)) ++k;
      if (is_ident(k) && !is_keyword(t_[k].text) &&
          (is_punct(k + 1, "=") || is_punct(k + 1, ";") || is_punct(k + 1, ",") || is_punct(k + 1, ")"))) {
        const std::string local(t_[k].text);
        facts.identifiers.insert(local);
        locals[local] = join_tokens(t_, i, storage ? k - 1 : k);
        if (storage && is_punct(k + 1, "=") && is_ident(k + 2)) {
          const std::string target(t_[k + 2].text);
          if (ctx.state_types.count(target)) aliases[local] = target;
          else if (auto it = aliases.find(target); it != aliases.end()) aliases[local] = it->second;
        }
        i = k;
        continue;
      }
    }
    // 0.4-style event invocation without `emit`.
    if (ctx.event_names.count(std::string(w)) && is_punct(i + 1, "(") &&
        (i == b || is_punct(i - 1, ";") || is_punct(i - 1, "{") || is_punct(i - 1, "}"))) {
      facts.emitted_events.emplace_back(w);
      ++stats.emit_count;
      continue;
    }
    if (is_punct(i + 1, "(") && !is_keyword(w)) facts.called_names.insert(std::string(w));

    std::string written;
    if (ctx.state_types.count(std::string(w)) && !locals.count(std::string(w))) written = std::string(w);
    else if (auto it = aliases.find(std::string(w)); it != aliases.end()) written = it->second;
    if (!written.empty()) {
      bool write = i > b && (is_punct(i - 1, "++") || is_punct(i - 1, "--") || is(i - 1, "delete"));
      std::size_t k = i + 1;
      bool plain = written == w;
      while (k < e) {
        if (is_punct(k, "[")) {
          k = std::min(partner(k), e) + 1;
          plain = false;
          continue;
        }
        if (is_punct(k, ".") && is_ident(k + 1)) {
          if ((is(k + 1, "push") || is(k + 1, "pop")) && is_punct(k + 2, "(")) {
            write = true;
            break;
          }
          k += 2;
          plain = false;
          continue;
        }
        break;
      }
      std::string value;
      if (!write && k < e && t_[k].kind == TokKind::Punct) {
        if (one_of(t_[k].text, kAssignOps)) {
          write = true;
          if (plain && t_[k].text == "=") value = join_tokens(t_, k + 1, statement_end(k + 1));
        } else if (t_[k].text == "++" || t_[k].text == "--") {
          write = true;
        }
      }
      if (write) {
        facts.writes.push_back({written, value, line_at(i), i});
        ++stats.state_write_count;
      }
    }
  }
}

ParseResult Parser::run() {
  std::size_t i = 0;
  while (i < size()) {
    const auto& tok = t_[i];
    if (tok.kind != TokKind::Ident) {
      if (tok.kind == TokKind::Punct && tok.text == "{") {
        warn(i, "unexpected block at file level");
        i = partner(i) + 1;
      } else {
        ++i;
      }
      continue;
    }
    const auto w = tok.text;
    if (w == "pragma") {
      const auto semi = find_semicolon(i, size());
      if (is(i + 1, "solidity") && semi > i + 2) {
        const auto from = t_[i + 2].offset;
        const auto to = semi < size() ? t_[semi].offset : src_.size();
        std::string text = text::trim(src_.substr(from, to - from));
        std::string collapsed;
        for (char c : text) {
          if (std::isspace(static_cast<unsigned char>(c))) {
            if (!collapsed.empty() && collapsed.back() != ' ') collapsed.push_back(' ');
          } else {
            collapsed.push_back(c);
          }
        }
        pragmas_.push_back(collapsed);
      }
      i = semi + 1;
    } else if (w == "import" || w == "using" || w == "error") {
      i = find_semicolon(i, size()) + 1;
    } else if (w == "abstract" && is(i + 1, "contract")) {
      i = parse_unit(i + 1, UnitKind::AbstractContract);
    } else if (w == "contract") {
      i = parse_unit(i, UnitKind::Contract);
    } else if (w == "interface") {
      i = parse_unit(i, UnitKind::Interface);
    } else if (w == "library") {
      i = parse_unit(i, UnitKind::Library);
    } else if (w == "enum") {
      i = parse_enum(i, size(), file_enums_);
    } else if (w == "struct") {
      i = parse_struct(i, size(), file_structs_);
    } else if (w == "event") {
      i = parse_event(i, size(), file_events_);
    } else if (w == "type" && is_ident(i + 1) && is(i + 2, "is")) {
      udvts_.insert(std::string(t_[i + 1].text));
      i = find_semicolon(i, size()) + 1;
    } else if (w == "function") {
      i = parse_function(i, size(), nullptr);
    } else {
      const auto semi = find_semicolon(i, size());
      if (semi >= size()) warn(i, "unrecognized top-level tokens");
      i = semi + 1;
    }
  }

  const RawUnit* primary = nullptr;
  for (const auto& u : units_) {
    if (u.kind == UnitKind::Contract || u.kind == UnitKind::AbstractContract) primary = &u;
  }
  if (!primary) throw UnparseableSource("no contract declaration found");

  ParseResult result;
  auto& s = result.surface;
  s.contract_name = primary->name;
  s.kind = primary->kind;
  s.line = primary->line;
  s.end_line = primary->end_line;
  s.pragma_versions = pragmas_;
  s.uses_inheritance = primary->bases;
  s.file_enums = file_enums_;
  s.file_structs = file_structs_;

  TypeContext ctx;
  for (const auto& u : units_) {
    if (u.kind == UnitKind::Library) ctx.non_contract.insert(u.name);
    else ctx.contract_like.insert(u.name);
    if (&u != primary) s.other_units.push_back({u.name, u.kind, u.line});
    for (const auto& en : u.enums) {
      ctx.non_contract.insert(en.name);
      if (&u != primary) s.file_enums.push_back(en);
    }
    for (const auto& st : u.structs) {
      ctx.non_contract.insert(st.name);
      if (&u != primary) s.file_structs.push_back(st);
    }
    for (const auto& ev : u.events) ctx.event_names.insert(ev.name);
  }
  for (const auto& en : file_enums_) ctx.non_contract.insert(en.name);
  for (const auto& st : file_structs_) ctx.non_contract.insert(st.name);
  for (const auto& ev : file_events_) ctx.event_names.insert(ev.name);
  for (const auto& u : udvts_) ctx.non_contract.insert(u);
  for (const auto& v : primary->state_vars) ctx.state_types[v.name] = v.type;

  auto param_map = [](const std::vector<Param>& params) {
    std::unordered_map<std::string, std::string> out;
    for (const auto& p : params)
      if (!p.name.empty()) out[p.name] = p.type;
    return out;
  };

  // Modifier bodies of every unit; the primary's also go to `modifiers`.
  TypeContext no_state = ctx;
  for (const auto& u : units_) {
    const bool is_primary = &u == primary;
    for (const auto& rm : u.modifiers) {
      ModifierDecl m = rm.decl;
      BodyStats ignored;
      if (m.body_present) {
        analyze(rm.body_begin, rm.body_end, is_primary ? ctx : no_state, param_map(m.params), m.facts, ignored);
      }
      if (is_primary) s.modifiers.push_back(m);
      else s.file_modifiers.push_back(std::move(m));
    }
  }

  for (const auto& rf : primary->functions) {
    FunctionDecl fn = rf.decl;
    if (fn.body_present) analyze(rf.body_begin, rf.body_end, ctx, param_map(fn.params), fn.facts, fn.body_stats);
    s.functions.push_back(std::move(fn));
  }
  s.state_variables = primary->state_vars;
  s.enums = primary->enums;
  s.events = primary->events;
  s.structs = primary->structs;

  // Reference counts over the contract body, declaration token excluded.
  {
    std::unordered_map<std::string_view, int> counts;
    const auto stop = std::min(primary->end, size());
    for (std::size_t k = primary->begin; k < stop; ++k) {
      if (t_[k].kind == TokKind::Ident && !(k > 0 && is_punct(k - 1, "."))) ++counts[t_[k].text];
    }
    for (std::size_t n = 0; n < s.state_variables.size(); ++n) {
      auto& v = s.state_variables[n];
      v.references = std::max(0, counts[v.name] - 1);
    }
  }

  auto duplicates = [&](const auto& items, std::string_view what) {
    std::map<std::string, int> seen;
    for (const auto& item : items) {
      if (++seen[item.name] == 2) {
        result.warnings.push_back({item.line, "duplicate " + std::string(what) + " name " + item.name});
      }
    }
  };
  duplicates(s.functions, "function");
  duplicates(s.events, "event");
  duplicates(s.enums, "enum");

  result.warnings.insert(result.warnings.begin(), warnings_.begin(), warnings_.end());
  return result;
}

int name_affinity(std::string_view variable) {
  const auto lower = text::to_lower(variable);
  if (lower == "currentstate" || lower == "state" || lower == "status") return 2;
  if (lower.find("state") != std::string::npos || lower.find("status") != std::string::npos) return 1;
  return 0;
}

}  // namespace

ParseResult parse_surface(std::string_view source) { return Parser(source).run(); }

std::optional<StateBinding> bind_state_enum(const ContractSurface& surface) {
  std::optional<StateBinding> best;
  int best_affinity = -1;
  for (const auto& v : surface.state_variables) {
    if (v.is_constant) continue;
    std::string type = v.type;
    if (auto p = type.rfind('.'); p != std::string::npos) type = type.substr(p + 1);
    if (!surface.find_enum(type)) continue;
    const int affinity = name_affinity(v.name);
    if (affinity > best_affinity) {
      best = StateBinding{type, v.name};
      best_affinity = affinity;
    }
  }
  return best;
}

int count_states(const ContractSurface& surface) {
  const auto binding = bind_state_enum(surface);
  if (!binding) return 0;
  const auto* en = surface.find_enum(binding->enum_name);
  return en ? static_cast<int>(en->members.size()) : 0;
}

TransitiveEffects transitive_effects(const ContractSurface& surface, const FunctionDecl& fn) {
  TransitiveEffects out;
  std::unordered_set<const FunctionDecl*> seen;
  std::function<void(const FunctionDecl&)> visit = [&](const FunctionDecl& f) {
    if (!seen.insert(&f).second) return;
    out.state_writes += f.body_stats.state_write_count;
    out.external_calls += f.body_stats.external_call_count;
    out.emits += f.body_stats.emit_count;
    for (const auto& name : f.facts.called_names) {
      for (const auto& g : surface.functions) {
        if (g.name == name) visit(g);
      }
    }
  };
  visit(fn);
  return out;
}

}  // namespace solbench
