#include "solbench/dataset.hpp"

#include <algorithm>
#include <set>

#include "json_util.hpp"
#include "solbench/error.hpp"
#include "solbench/text.hpp"

namespace solbench {
namespace {

using detail::json;

std::optional<FsmSpec> fsm_from_node(const json& node) {
  if (!node.is_object()) return std::nullopt;
  if (!node.contains("states") && !node.contains("transitions")) return std::nullopt;
  FsmSpec fsm;
  try {
    detail::JsonReader<Error> r(node, "fsm");
    fsm.states = r.string_list("states");
    r.objects("transitions", [&](const detail::JsonReader<Error>& t) {
      fsm.transitions.push_back({t.string("from"), t.string("to"), t.string("condition"), t.string("action")});
    });
  } catch (const Error&) {
    return std::nullopt;
  }
  return fsm;
}

std::string text_field(const json& node, std::initializer_list<const char*> keys, bool& wrong_type) {
  for (const char* k : keys) {
    auto it = node.find(k);
    if (it == node.end() || it->is_null()) continue;
    if (it->is_string()) return it->get<std::string>();
    wrong_type = true;
    return {};
  }
  return {};
}

}  // namespace

std::vector<std::string> unresolved_fsm_states(const FsmSpec& fsm) {
  std::set<std::string> states(fsm.states.begin(), fsm.states.end());
  std::vector<std::string> out;
  for (const auto& t : fsm.transitions) {
    for (const auto* end : {&t.from, &t.to}) {
      if (!states.count(*end) && std::find(out.begin(), out.end(), *end) == out.end())
        out.push_back(*end);
    }
  }
  return out;
}

std::optional<FsmSpec> fsm_from_json(std::string_view text) {
  auto j = detail::try_parse(text);
  if (!j) return std::nullopt;
  return fsm_from_node(*j);
}

std::string fsm_to_json(const FsmSpec& fsm) {
  json transitions = json::array();
  for (const auto& t : fsm.transitions)
    transitions.push_back({{"from", t.from}, {"to", t.to}, {"condition", t.condition}, {"action", t.action}});
  return json{{"states", fsm.states}, {"transitions", transitions}}.dump();
}

JsonlItem parse_entry_line(std::string_view line, std::size_t line_no) {
  auto parsed = detail::try_parse(line);
  if (!parsed) return LineError{line_no, "invalid JSON"};
  const json& node = *parsed;
  if (!node.is_object()) return LineError{line_no, "line is not a JSON object"};

  BenchmarkEntry e;
  bool wrong_type = false;
  if (auto it = node.find("id"); it != node.end() && !it->is_null()) {
    e.id = it->is_string() ? it->get<std::string>() : it->dump();
  } else {
    e.id = "line-" + std::to_string(line_no);
  }
  e.requirement = text_field(node, {"requirement", "spec"}, wrong_type);
  e.ground_truth_code = text_field(node, {"code", "ground_truth"}, wrong_type);
  if (wrong_type) return LineError{line_no, "text fields must be strings"};
  if (text::trim(e.requirement).empty()) return LineError{line_no, "missing requirement text"};
  if (text::trim(e.ground_truth_code).empty()) return LineError{line_no, "missing ground-truth code"};

  if (auto it = node.find("fsm"); it != node.end() && !it->is_null()) {
    if (it->is_string()) {
      e.fsm_text = it->get<std::string>();
      e.fsm = fsm_from_json(e.fsm_text);
    } else {
      e.fsm_text = it->dump();
      e.fsm = fsm_from_node(*it);
    }
  }
  return e;
}

JsonlReader::JsonlReader(const std::filesystem::path& path) : path_(path), in_(path, std::ios::binary) {
  std::error_code ec;
  if (!in_ || std::filesystem::is_directory(path, ec)) {
    throw IoFailure("cannot open dataset " + path.string());
  }
}

std::optional<JsonlItem> JsonlReader::next() {
  std::string line;
  while (std::getline(in_, line)) {
    ++line_no_;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (text::trim(line).empty()) continue;
    return parse_entry_line(line, line_no_);
  }
  if (in_.bad()) throw IoFailure("read error in " + path_.string());
  return std::nullopt;
}

LoadResult load_jsonl(const std::filesystem::path& path) {
  JsonlReader reader(path);
  LoadResult out;
  while (auto item = reader.next()) {
    if (auto* e = std::get_if<BenchmarkEntry>(&*item)) out.entries.push_back(std::move(*e));
    else out.errors.push_back(std::get<LineError>(*item));
  }
  return out;
}

std::string_view to_string(Tier tier) {
  switch (tier) {
    case Tier::Low: return "Low";
    case Tier::Medium: return "Medium";
    case Tier::High: return "High";
  }
  return "?";
}

ComplexityTier classify_complexity(int function_count, int state_count) {
  if (function_count < 0 || state_count < 0) throw DomainError("complexity counts must be non-negative");
  auto band = [](int n, int medium_from, int high_from) {
    if (n >= high_from) return Tier::High;
    if (n >= medium_from) return Tier::Medium;
    return Tier::Low;
  };
  const Tier by_functions = band(function_count, 4, 8);
  const Tier by_states = band(state_count, 3, 5);
  return ComplexityTier{std::max(by_functions, by_states), function_count, state_count,
                        function_count == 0 || state_count == 0};
}

}  // namespace solbench
