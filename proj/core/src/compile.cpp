#include "solbench/compile.hpp"

#include <algorithm>
#include <regex>

#include "json_util.hpp"
#include "lexer.hpp"
#include "solbench/text.hpp"
#include "subprocess.hpp"

namespace solbench {

using detail::json;

std::string_view to_string(CompileStatus s) {
  switch (s) {
    case CompileStatus::Success: return "success";
    case CompileStatus::Failure: return "failure";
    case CompileStatus::NotChecked: return "not_checked";
  }
  return "?";
}

std::optional<CompileStatus> parse_compile_status(std::string_view s) {
  const auto t = text::to_lower(text::trim(s));
  if (t == "success") return CompileStatus::Success;
  if (t == "failure") return CompileStatus::Failure;
  if (t == "not_checked" || t == "not checked") return CompileStatus::NotChecked;
  return std::nullopt;
}

CompilerSet::CompilerSet(std::vector<InstalledCompiler> compilers) : compilers_(std::move(compilers)) {
  std::sort(compilers_.begin(), compilers_.end(),
            [](const InstalledCompiler& a, const InstalledCompiler& b) { return a.version < b.version; });
}

CompilerSet CompilerSet::discover(const std::filesystem::path& dir) {
  static const std::regex kName(R"(^solc-(?:linux-amd64-)?v?(\d+\.\d+\.\d+)(?:\+.*)?$)");
  std::vector<InstalledCompiler> found;
  std::error_code ec;
  if (!std::filesystem::is_directory(dir, ec)) return CompilerSet{};
  for (const auto& entry : std::filesystem::directory_iterator(dir, ec)) {
    const auto name = entry.path().filename().string();
    std::smatch m;
    if (!std::regex_match(name, m, kName)) continue;
    if (!entry.is_regular_file(ec) && !entry.is_symlink(ec)) continue;
    const auto perms = std::filesystem::status(entry.path(), ec).permissions();
    if ((perms & std::filesystem::perms::owner_exec) == std::filesystem::perms::none) continue;
    if (auto v = Version::parse(m[1].str())) found.push_back({*v, entry.path()});
  }
  return CompilerSet(std::move(found));
}

const InstalledCompiler* CompilerSet::resolve(const std::vector<std::string>& pragmas) const {
  for (auto it = compilers_.rbegin(); it != compilers_.rend(); ++it) {
    if (pragmas.empty()) {
      if (it->version.major == 0 && it->version.minor == 8) return &*it;
    } else if (pragmas_admit(pragmas, it->version)) {
      return &*it;
    }
  }
  return nullptr;
}

namespace {

std::vector<std::string> source_pragmas(std::string_view source) {
  const auto lx = detail::lex(source);
  std::vector<std::string> out;
  const auto& t = lx.tokens;
  for (std::size_t i = 0; i + 2 < t.size(); ++i) {
    if (t[i].text != "pragma" || t[i + 1].text != "solidity") continue;
    std::size_t j = i + 2;
    while (j < t.size() && t[j].text != ";") ++j;
    const auto from = t[i + 2].offset;
    const auto to = j < t.size() ? t[j].offset : source.size();
    out.push_back(text::trim(source.substr(from, to - from)));
    i = j;
  }
  return out;
}

int line_of(std::string_view source, long offset) {
  if (offset < 0) return 0;
  const auto end = std::min<std::size_t>(static_cast<std::size_t>(offset), source.size());
  return 1 + static_cast<int>(std::count(source.begin(), source.begin() + static_cast<long>(end), '\n'));
}

}  // namespace

CompileResult compile_check(std::string_view source, std::chrono::milliseconds timeout,
                            const CompilerSet& compilers) {
  CompileResult result;
  const auto started = std::chrono::steady_clock::now();
  auto finish = [&] {
    result.duration = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - started);
    return result;
  };
  if (compilers.empty()) {
    result.reason = "no compiler installed";
    return finish();
  }
  const auto pragmas = source_pragmas(source);
  const auto* compiler = compilers.resolve(pragmas);
  if (!compiler) {
    std::string joined;
    for (const auto& p : pragmas) joined += (joined.empty() ? "" : "; ") + p;
    result.reason = pragmas.empty() ? "no 0.8.x compiler installed"
                                    : "no installed compiler satisfies pragma " + joined;
    return finish();
  }
  result.compiler_version = compiler->version.str();

  json input = {
      {"language", "Solidity"},
      {"sources", {{"contract.sol", {{"content", std::string(source)}}}}},
      {"settings", {{"outputSelection", {{"*", {{"*", {"evm.bytecode.object"}}}}}}}},
  };
  const auto proc = detail::run_process({compiler->executable.string(), "--standard-json"},
                                        input.dump(), timeout);
  if (!proc.started) {
    result.compiler_version.clear();
    result.reason = "compiler could not be started: " + proc.error;
    return finish();
  }
  result.status = CompileStatus::Failure;
  if (proc.timed_out) {
    result.diagnostics.push_back({"error", "compilation timed out after " + std::to_string(timeout.count()) + " ms", std::nullopt});
    return finish();
  }
  const auto brace = proc.out.find('{');
  std::optional<json> output;
  if (brace != std::string::npos) output = detail::try_parse(std::string_view(proc.out).substr(brace));
  if (!output || !output->is_object()) {
    std::string detail = text::trim(proc.err.empty() ? proc.out : proc.err);
    if (detail.size() > 500) detail.resize(500);
    result.diagnostics.push_back({"error", "compiler produced no readable output (exit " +
                                               std::to_string(proc.exit_code) + "): " + detail,
                                  std::nullopt});
    return finish();
  }
  bool errors = false;
  if (auto it = output->find("errors"); it != output->end() && it->is_array()) {
    for (const auto& e : *it) {
      if (!e.is_object()) continue;
      Diagnostic d;
      d.severity = e.value("severity", "error");
      d.message = e.value("message", e.value("formattedMessage", ""));
      if (auto loc = e.find("sourceLocation"); loc != e.end() && loc->is_object()) {
        const long start = loc->value("start", -1L);
        if (start >= 0) d.line = line_of(source, start);
      }
      if (d.severity == "error") errors = true;
      result.diagnostics.push_back(std::move(d));
    }
  }
  result.status = errors ? CompileStatus::Failure : CompileStatus::Success;
  return finish();
}

CompileStats compile_rate(int success, int failure, int not_checked) {
  CompileStats s;
  s.success = success;
  s.failure = failure;
  s.not_checked = not_checked;
  s.checked = success + failure;
  s.total = s.checked + not_checked;
  if (s.checked > 0) s.rate = static_cast<double>(success) / s.checked;
  return s;
}

CompileStats compile_rate(std::span<const CompileResult> results) {
  int success = 0, failure = 0, not_checked = 0;
  for (const auto& r : results) {
    switch (r.status) {
      case CompileStatus::Success: ++success; break;
      case CompileStatus::Failure: ++failure; break;
      case CompileStatus::NotChecked: ++not_checked; break;
    }
  }
  return compile_rate(success, failure, not_checked);
}

}  // namespace solbench
