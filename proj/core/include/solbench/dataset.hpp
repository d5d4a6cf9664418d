#pragma once

#include <cstddef>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace solbench {

struct FsmTransition {
  std::string from;
  std::string to;
  std::string condition;
  std::string action;

  bool operator==(const FsmTransition&) const = default;
};

struct FsmSpec {
  std::vector<std::string> states;
  std::vector<FsmTransition> transitions;

  bool operator==(const FsmSpec&) const = default;
};

/// Transition endpoints that do not name a declared state, in order.
std::vector<std::string> unresolved_fsm_states(const FsmSpec& fsm);

struct BenchmarkEntry {
  std::string id;
  std::string requirement;
  /// Structured FSM when the `fsm` field was an object (or a JSON string
  /// holding one); otherwise only `fsm_text` is set.
  std::optional<FsmSpec> fsm;
  std::string fsm_text;
  std::string ground_truth_code;
};

/// A malformed JSONL line. `line` is 1-based.
struct LineError {
  std::size_t line = 0;
  std::string message;
};

using JsonlItem = std::variant<BenchmarkEntry, LineError>;

/// Streams a benchmark JSONL file one record at a time. Accepted keys:
/// `id`, `requirement`|`spec`, `fsm`, `code`|`ground_truth`. Entries without
/// an `id` are named `line-<n>`.
class JsonlReader {
 public:
  /// Throws IoFailure if the file cannot be opened.
  explicit JsonlReader(const std::filesystem::path& path);

  /// Next entry or line error; nullopt at end of file. Blank lines are skipped.
  std::optional<JsonlItem> next();

  std::size_t lines_read() const { return line_no_; }

 private:
  std::filesystem::path path_;
  std::ifstream in_;
  std::size_t line_no_ = 0;
};

/// Parses one JSONL line into an entry (or the error describing why not).
JsonlItem parse_entry_line(std::string_view line, std::size_t line_no);

struct LoadResult {
  std::vector<BenchmarkEntry> entries;
  std::vector<LineError> errors;
};

/// Reads the whole file. Throws IoFailure if unreadable.
LoadResult load_jsonl(const std::filesystem::path& path);

std::optional<FsmSpec> fsm_from_json(std::string_view text);
std::string fsm_to_json(const FsmSpec& fsm);

enum class Tier { Low, Medium, High };

std::string_view to_string(Tier tier);

struct ComplexityTier {
  Tier tier = Tier::Low;
  int function_count = 0;
  int state_count = 0;
  /// A zero count: the table bands start at one.
  bool degenerate = false;

  bool operator==(const ComplexityTier&) const = default;
};

/// Low iff functions <= 3 and states <= 2; High iff functions >= 8 or
/// states >= 5; Medium otherwise. Negative counts throw DomainError.
ComplexityTier classify_complexity(int function_count, int state_count);

}  // namespace solbench
