#pragma once

#include <chrono>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "solbench/version.hpp"

namespace solbench {

enum class CompileStatus { Success, Failure, NotChecked };

std::string_view to_string(CompileStatus s);
std::optional<CompileStatus> parse_compile_status(std::string_view s);

struct Diagnostic {
  std::string severity;
  std::string message;
  std::optional<int> line;
};

struct CompileResult {
  CompileStatus status = CompileStatus::NotChecked;
  std::string compiler_version;
  std::vector<Diagnostic> diagnostics;
  std::chrono::milliseconds duration{0};
  /// Why the check was skipped (NotChecked only).
  std::string reason;
};

struct InstalledCompiler {
  Version version;
  std::filesystem::path executable;
};

/// Compiler executables found in one directory. Recognized names:
/// `solc-0.8.26`, `solc-v0.8.26`, `solc-linux-amd64-v0.8.26+commit.x`.
/// Each must accept `--standard-json` on stdin.
class CompilerSet {
 public:
  CompilerSet() = default;
  explicit CompilerSet(std::vector<InstalledCompiler> compilers);

  static CompilerSet discover(const std::filesystem::path& dir);

  /// Highest installed version admitted by the pragmas; newest 0.8.x when
  /// there is no pragma.
  const InstalledCompiler* resolve(const std::vector<std::string>& pragmas) const;

  std::span<const InstalledCompiler> compilers() const { return compilers_; }
  bool empty() const { return compilers_.empty(); }

 private:
  std::vector<InstalledCompiler> compilers_;
};

/// Compiles through the standard-JSON interface with bytecode requested.
/// Never throws: every outcome is encoded in the result.
CompileResult compile_check(std::string_view source, std::chrono::milliseconds timeout,
                            const CompilerSet& compilers);

struct CompileStats {
  int total = 0;
  int checked = 0;
  int success = 0;
  int failure = 0;
  int not_checked = 0;
  /// success / (success + failure); absent when nothing was checked.
  std::optional<double> rate;

  bool operator==(const CompileStats&) const = default;
};

CompileStats compile_rate(std::span<const CompileResult> results);
CompileStats compile_rate(int success, int failure, int not_checked);

}  // namespace solbench
