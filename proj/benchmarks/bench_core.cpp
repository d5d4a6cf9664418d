#include <benchmark/benchmark.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "solbench/abi.hpp"
#include "solbench/lint.hpp"
#include "solbench/metrics.hpp"
#include "solbench/pipeline.hpp"
#include "solbench/schema.hpp"
#include "solbench/surface.hpp"

using namespace solbench;
namespace fs = std::filesystem;

namespace {

const fs::path kFixtures = SOLBENCH_FIXTURES;

std::string read(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const std::vector<std::string>& corpus() {
  static const auto sources = [] {
    std::vector<fs::path> paths;
    for (const auto& e : fs::directory_iterator(kFixtures / "corpus"))
      if (e.path().extension() == ".sol") paths.push_back(e.path());
    std::sort(paths.begin(), paths.end());
    std::vector<std::string> out;
    for (const auto& p : paths) out.push_back(read(p));
    return out;
  }();
  return sources;
}

void BM_ParseCorpus(benchmark::State& state) {
  std::size_t bytes = 0;
  for (const auto& s : corpus()) bytes += s.size();
  for (auto _ : state)
    for (const auto& s : corpus()) benchmark::DoNotOptimize(parse_surface(s));
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations() * bytes));
}
BENCHMARK(BM_ParseCorpus);

void BM_LintCorpus(benchmark::State& state) {
  std::vector<ContractSurface> surfaces;
  for (const auto& s : corpus()) surfaces.push_back(parse_surface(s).surface);
  for (auto _ : state)
    for (std::size_t i = 0; i < surfaces.size(); ++i)
      benchmark::DoNotOptimize(lint_forbidden_patterns(surfaces[i], corpus()[i]));
}
BENCHMARK(BM_LintCorpus);

void BM_EvaluateStaking(benchmark::State& state) {
  const auto source = read(kFixtures / "staking/Staking.sol");
  const auto surface = parse_surface(source).surface;
  const auto schema = schema_from_json(read(kFixtures / "staking/schema.json"));
  const auto lint = lint_forbidden_patterns(surface, source);
  for (auto _ : state) benchmark::DoNotOptimize(evaluate_quality(schema, nullptr, surface, source, lint));
}
BENCHMARK(BM_EvaluateStaking);

void BM_Composite(benchmark::State& state) {
  MetricScores s{84.45, 84.62, 83.12, 76.73, 83.85};
  for (auto _ : state) {
    benchmark::DoNotOptimize(composite(s));
    s.m5_code_quality = s.m5_code_quality < 99 ? s.m5_code_quality + 0.5 : 0;
  }
}
BENCHMARK(BM_Composite);

void BM_AbiExportCorpus(benchmark::State& state) {
  std::vector<ContractSurface> surfaces;
  for (const auto& s : corpus()) surfaces.push_back(parse_surface(s).surface);
  for (auto _ : state)
    for (const auto& s : surfaces) benchmark::DoNotOptimize(abi_to_json(export_abi(s).entries));
}
BENCHMARK(BM_AbiExportCorpus);

void BM_ScriptedPipeline(benchmark::State& state) {
  PipelineConfig config;
  config.compile = false;
  const Pipeline pipeline(config, ScriptedBackend::from_file((kFixtures / "scripts/staking.json").string()),
                          CompilerSet{});
  JsonlReader reader{kFixtures / "datasets/staking10.jsonl"};
  const auto entry = std::get<BenchmarkEntry>(*reader.next());
  for (auto _ : state) benchmark::DoNotOptimize(pipeline.run(entry));
}
BENCHMARK(BM_ScriptedPipeline);

}  // namespace

BENCHMARK_MAIN();
