#pragma once

#include <chrono>
#include <string>
#include <string_view>
#include <vector>

namespace solbench::detail {

struct ProcessResult {
  /// False when the executable could not be started at all.
  bool started = false;
  bool timed_out = false;
  int exit_code = -1;
  std::string out;
  std::string err;
  std::string error;
};

/// Runs `argv` with `input` on stdin, collecting stdout and stderr. The child
/// (and its process group) is killed once `timeout` elapses.
ProcessResult run_process(const std::vector<std::string>& argv, std::string_view input,
                          std::chrono::milliseconds timeout);

}  // namespace solbench::detail
