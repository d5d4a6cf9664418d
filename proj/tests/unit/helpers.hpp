#pragma once

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "solbench/compile.hpp"

namespace testing {

inline std::filesystem::path fixture(const std::string& rel) { return std::filesystem::path(SOLBENCH_FIXTURES) / rel; }

inline std::string read(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw std::runtime_error("missing fixture " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::string read_fixture(const std::string& rel) { return read(fixture(rel)); }

/// Fresh empty directory under the system temp dir.
inline std::filesystem::path temp_dir(const std::string& tag) {
  static std::mt19937_64 rng(std::random_device{}());
  auto dir = std::filesystem::temp_directory_path() / ("solbench-" + tag + "-" + std::to_string(rng()));
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

inline std::filesystem::path solc_dir() {
  if (const char* env = std::getenv("SOLBENCH_SOLC_DIR"); env && *env) return env;
  return "/opt/solc/bin";
}

inline const solbench::CompilerSet& compilers() {
  static const auto set = solbench::CompilerSet::discover(solc_dir());
  return set;
}

}  // namespace testing
