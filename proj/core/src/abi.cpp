#include "solbench/abi.hpp"

#include <algorithm>

#include "json_util.hpp"
#include "solbench/error.hpp"
#include "solbench/text.hpp"

namespace solbench {

using detail::json;

std::string_view to_string(AbiKind k) {
  switch (k) {
    case AbiKind::Function: return "function";
    case AbiKind::Constructor: return "constructor";
    case AbiKind::Event: return "event";
    case AbiKind::Fallback: return "fallback";
    case AbiKind::Receive: return "receive";
  }
  return "?";
}

namespace {

std::optional<AbiKind> parse_kind(std::string_view s) {
  for (auto k : {AbiKind::Function, AbiKind::Constructor, AbiKind::Event, AbiKind::Fallback, AbiKind::Receive})
    if (to_string(k) == s) return k;
  return std::nullopt;
}

bool all_digits(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

std::optional<std::string> normalize_elementary(const std::string& t) {
  if (t == "uint") return "uint256";
  if (t == "int") return "int256";
  if (t == "byte") return "bytes1";
  if (t == "fixed") return "fixed128x18";
  if (t == "ufixed") return "ufixed128x18";
  if (t == "address" || t == "address payable" || t == "bool" || t == "string" || t == "bytes") {
    return std::string(t == "address payable" ? "address" : t);
  }
  for (std::string_view prefix : {"uint", "int", "bytes"}) {
    if (t.starts_with(prefix) && all_digits(std::string_view(t).substr(prefix.size()))) return t;
  }
  for (std::string_view prefix : {"ufixed", "fixed"}) {
    if (!t.starts_with(prefix)) continue;
    const auto rest = std::string_view(t).substr(prefix.size());
    const auto x = rest.find('x');
    if (x != std::string_view::npos && all_digits(rest.substr(0, x)) && all_digits(rest.substr(x + 1))) return t;
  }
  if (t.starts_with("function")) return "function";
  return std::nullopt;
}

std::string mutability_text(Mutability m) {
  switch (m) {
    case Mutability::View: return "view";
    case Mutability::Pure: return "pure";
    case Mutability::Payable: return "payable";
    case Mutability::None: break;
  }
  return "nonpayable";
}

json param_json(const AbiParam& p) {
  json j = json::object();
  j["name"] = p.name;
  j["type"] = p.type;
  if (p.indexed) j["indexed"] = *p.indexed;
  return j;
}

}  // namespace

std::optional<std::string> normalize_abi_type(std::string_view raw, const ContractSurface& surface) {
  std::string compact;
  for (char c : text::trim(raw)) {
    if (c == ' ' && !compact.empty() && compact.back() == ' ') continue;
    compact.push_back(c);
  }
  // Peel array suffixes off the end: `uint[2][]` -> base `uint`, suffix `[2][]`.
  std::string suffix;
  while (!compact.empty() && compact.back() == ']') {
    const auto open = compact.rfind('[');
    if (open == std::string::npos) return std::nullopt;
    std::string dims;
    for (char c : compact.substr(open)) {
      if (c != ' ') dims.push_back(c);
    }
    suffix = dims + suffix;
    compact = text::trim(compact.substr(0, open));
  }
  if (compact.empty() || compact.starts_with("mapping")) return std::nullopt;
  if (auto e = normalize_elementary(compact)) return *e + suffix;

  std::string base = compact;
  if (auto dot = base.rfind('.'); dot != std::string::npos) base = base.substr(dot + 1);
  if (const auto* en = surface.find_enum(base); en && en->members.size() <= 256) return "uint8" + suffix;
  if (base == surface.contract_name) return "address" + suffix;
  for (const auto& u : surface.other_units) {
    if (u.name == base && u.kind != UnitKind::Library) return "address" + suffix;
  }
  return std::nullopt;
}

AbiExport export_abi(const ContractSurface& surface) {
  struct Item {
    int line;
    std::size_t order;
    AbiEntry entry;
  };
  AbiExport out;
  std::vector<Item> items;

  auto convert = [&](const std::vector<Param>& params, const std::string& entry, bool event) {
    std::vector<AbiParam> result;
    for (const auto& p : params) {
      AbiParam ap;
      ap.name = p.name;
      if (auto t = normalize_abi_type(p.type, surface)) {
        ap.type = *t;
      } else {
        ap.type = p.type;
        out.warnings.push_back({entry, p.type, "unsupported ABI type emitted verbatim"});
      }
      if (event) ap.indexed = p.indexed;
      result.push_back(std::move(ap));
    }
    return result;
  };

  for (const auto& fn : surface.functions) {
    if (fn.visibility == Visibility::Private || fn.visibility == Visibility::Internal) continue;
    AbiEntry e;
    if (fn.name == "constructor") {
      e.kind = AbiKind::Constructor;
      e.inputs = convert(fn.params, "constructor", false);
    } else if (fn.name == "fallback") {
      e.kind = AbiKind::Fallback;
    } else if (fn.name == "receive") {
      e.kind = AbiKind::Receive;
    } else {
      e.kind = AbiKind::Function;
      e.name = fn.name;
      e.inputs = convert(fn.params, fn.name, false);
      e.outputs = convert(fn.return_params, fn.name, false);
    }
    e.state_mutability = mutability_text(fn.mutability);
    items.push_back({fn.line, items.size(), std::move(e)});
  }
  for (const auto& ev : surface.events) {
    AbiEntry e;
    e.kind = AbiKind::Event;
    e.name = ev.name;
    e.inputs = convert(ev.params, ev.name, true);
    e.anonymous = ev.anonymous;
    items.push_back({ev.line, items.size(), std::move(e)});
  }
  std::stable_sort(items.begin(), items.end(), [](const Item& a, const Item& b) {
    return a.line != b.line ? a.line < b.line : a.order < b.order;
  });
  for (auto& item : items) out.entries.push_back(std::move(item.entry));
  return out;
}

std::string abi_to_json(const std::vector<AbiEntry>& entries) {
  json arr = json::array();
  for (const auto& e : entries) {
    json j = json::object();
    j["type"] = std::string(to_string(e.kind));
    switch (e.kind) {
      case AbiKind::Event: {
        j["name"] = e.name.value_or("");
        j["anonymous"] = e.anonymous;
        json inputs = json::array();
        for (const auto& p : e.inputs) inputs.push_back(param_json(p));
        j["inputs"] = inputs;
        break;
      }
      case AbiKind::Function: {
        j["name"] = e.name.value_or("");
        json inputs = json::array(), outputs = json::array();
        for (const auto& p : e.inputs) inputs.push_back(param_json(p));
        for (const auto& p : e.outputs) outputs.push_back(param_json(p));
        j["inputs"] = inputs;
        j["outputs"] = outputs;
        j["stateMutability"] = e.state_mutability;
        break;
      }
      case AbiKind::Constructor: {
        json inputs = json::array();
        for (const auto& p : e.inputs) inputs.push_back(param_json(p));
        j["inputs"] = inputs;
        j["stateMutability"] = e.state_mutability;
        break;
      }
      case AbiKind::Fallback:
      case AbiKind::Receive:
        j["stateMutability"] = e.state_mutability;
        break;
    }
    arr.push_back(std::move(j));
  }
  // nlohmann::json objects are std::map backed, so keys come out sorted.
  return arr.dump(2);
}

std::vector<AbiEntry> abi_from_json(std::string_view text) {
  const auto parsed = detail::try_parse(text);
  if (!parsed || !parsed->is_array()) throw Error("ABI JSON must be an array");
  std::vector<AbiEntry> out;
  auto params = [](const json* node, const std::string& path, bool event) {
    std::vector<AbiParam> result;
    if (!node) return result;
    if (!node->is_array()) throw Error(path + ": expected an array");
    for (const auto& p : *node) {
      if (!p.is_object()) throw Error(path + ": expected parameter objects");
      detail::JsonReader<Error> r(p, path);
      AbiParam ap{r.string("name"), r.string("type"), std::nullopt};
      if (ap.type.empty()) throw Error(path + ": parameter without a type");
      if (event) {
        const json* idx = r.find("indexed");
        ap.indexed = idx && idx->is_boolean() && idx->get<bool>();
      }
      result.push_back(std::move(ap));
    }
    return result;
  };
  for (std::size_t i = 0; i < parsed->size(); ++i) {
    const auto& node = (*parsed)[i];
    const std::string path = "abi[" + std::to_string(i) + "]";
    if (!node.is_object()) throw Error(path + ": expected an object");
    detail::JsonReader<Error> r(node, path);
    const auto kind = parse_kind(r.string("type", "function"));
    if (!kind) throw Error(path + ": unknown entry type '" + r.string("type") + "'");
    AbiEntry e;
    e.kind = *kind;
    if (e.kind == AbiKind::Function || e.kind == AbiKind::Event) e.name = r.string("name");
    const bool event = e.kind == AbiKind::Event;
    e.inputs = params(r.find("inputs"), path + ".inputs", event);
    e.outputs = params(r.find("outputs"), path + ".outputs", false);
    if (!event) {
      e.state_mutability = r.string("stateMutability");
      if (e.state_mutability.empty()) {
        const json* payable = r.find("payable");
        const json* constant = r.find("constant");
        if (payable && payable->is_boolean() && payable->get<bool>()) e.state_mutability = "payable";
        else if (constant && constant->is_boolean() && constant->get<bool>()) e.state_mutability = "view";
        else e.state_mutability = "nonpayable";
      }
    } else {
      const json* anon = r.find("anonymous");
      e.anonymous = anon && anon->is_boolean() && anon->get<bool>();
    }
    out.push_back(std::move(e));
  }
  return out;
}

}  // namespace solbench
