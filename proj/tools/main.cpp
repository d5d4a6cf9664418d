#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "breakdown.hpp"
#include "solbench/config.hpp"
#include "solbench/error.hpp"
#include "solbench/pipeline.hpp"
#include "solbench/prompts.hpp"

namespace fs = std::filesystem;
using namespace solbench;

namespace {

constexpr int kOk = 0;
constexpr int kEnvironment = 1;
constexpr int kUsage = 2;
constexpr int kProcessing = 3;

/// Settings shared by every subcommand.
struct Common {
  std::string config_path;
  std::string provider;
  std::string script;
  std::string model;
  std::string compiler_dir;
  int max_refine = -1;
  bool no_reinforcement = false;
  bool no_compile = false;
  std::vector<std::string> sets;
};

struct UsageError : Error {
  using Error::Error;
};

struct EnvironmentError : Error {
  using Error::Error;
};

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

PipelineConfig build_config(const Common& c) {
  PipelineConfig config;
  if (!c.config_path.empty()) {
    if (!fs::exists(c.config_path)) throw UsageError("config file " + c.config_path + " does not exist");
    config = load_pipeline_config(c.config_path);
  }
  for (const auto& kv : c.sets) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + kv + "'");
    apply_setting(config, kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (!c.provider.empty()) apply_setting(config, "provider", c.provider);
  if (!c.script.empty()) {
    config.script_path = c.script;
    if (c.provider.empty()) config.provider = "scripted";
  }
  if (!c.model.empty()) apply_setting(config, "model", c.model);
  if (c.max_refine >= 0) config.max_refinement_iterations = c.max_refine;
  if (c.no_reinforcement) config.enable_reinforcement = false;
  if (c.no_compile) config.compile = false;
  if (!c.compiler_dir.empty()) config.compiler_dir = c.compiler_dir;
  return config;
}

fs::path compiler_dir(const PipelineConfig& config) {
  if (!config.compiler_dir.empty()) return config.compiler_dir;
  if (const char* env = std::getenv("SOLBENCH_SOLC_DIR"); env && *env) return env;
  return "/opt/solc/bin";
}

std::shared_ptr<ChatBackend> make_backend(const PipelineConfig& config) {
  if (config.provider == "scripted") {
    if (config.script_path.empty()) throw UsageError("the scripted provider needs --script FILE");
    if (!fs::exists(config.script_path)) throw UsageError("script " + config.script_path.string() + " does not exist");
    return ScriptedBackend::from_file(config.script_path.string());
  }
  return std::make_shared<HttpChatBackend>(config.http);
}

void check_backend(ChatBackend& backend) {
  if (auto problem = backend.probe()) throw EnvironmentError("chat backend unavailable: " + *problem);
}

int cmd_batch(const Common& common, const std::string& input, const std::string& out, int parallelism,
              bool resume, bool force, std::size_t limit, bool quiet) {
  if (!fs::is_regular_file(input)) throw UsageError("input file " + input + " does not exist");
  auto config = build_config(common);
  if (parallelism > 0) config.parallelism = parallelism;
  const fs::path dir = out;
  if (fs::exists(dir) && !fs::is_directory(dir)) throw UsageError(out + " exists and is not a directory");
  if (fs::is_directory(dir) && !fs::is_empty(dir) && !resume) {
    if (!force) throw UsageError(out + " is not empty; pass --resume to continue or --force to start over");
    for (const char* name : {"records", "index.jsonl", "summary.json", "summary.md"}) fs::remove_all(dir / name);
  }
  auto backend = make_backend(config);
  check_backend(*backend);
  JsonlReader reader(input);
  Pipeline pipeline(config, backend, CompilerSet::discover(compiler_dir(config)));

  BatchOptions options;
  options.output_dir = dir;
  options.parallelism = config.parallelism;
  options.resume = resume;
  options.limit = limit;
  if (!quiet) {
    options.on_event = [](const std::string& id, const PipelineEvent& e) {
      if (e.kind != EventKind::Started) cli::print_event(std::cout, id, e);
    };
  }
  const auto result = run_batch(reader, pipeline, options);
  std::cout << render_report(result.summary, ReportFormat::Markdown);
  std::cerr << "processed " << result.processed << ", skipped " << result.skipped << ", unreadable lines "
            << result.line_errors.size() << "\n";
  for (const auto& e : result.line_errors) std::cerr << "  line " << e.line << ": " << e.message << "\n";
  if (result.failed) std::cerr << result.failed << " entries failed; see their records\n";
  return kOk;
}

BenchmarkEntry entry_from_dataset(const std::string& input, const std::string& id) {
  if (!fs::is_regular_file(input)) throw UsageError("input file " + input + " does not exist");
  JsonlReader reader(input);
  while (auto item = reader.next()) {
    if (auto* e = std::get_if<BenchmarkEntry>(&*item); e && e->id == id) return *e;
  }
  throw UsageError("no entry with id '" + id + "' in " + input);
}

int cmd_single(const Common& common, const std::string& input, const std::string& entry_id, const std::string& spec,
               const std::string& fsm, const std::string& gt, const std::string& out, bool as_json) {
  BenchmarkEntry entry;
  if (!entry_id.empty()) {
    if (input.empty()) throw UsageError("--entry needs --input");
    entry = entry_from_dataset(input, entry_id);
  } else if (!spec.empty()) {
    entry.id = fs::path(spec).stem().string();
    entry.requirement = read_text(spec);
    if (!fsm.empty()) {
      entry.fsm_text = read_text(fsm);
      entry.fsm = fsm_from_json(entry.fsm_text);
    }
    if (!gt.empty()) entry.ground_truth_code = read_text(gt);
  } else {
    throw UsageError("single needs --entry ID (with --input) or --spec FILE");
  }
  const auto config = build_config(common);
  auto backend = make_backend(config);
  check_backend(*backend);
  Pipeline pipeline(config, backend, CompilerSet::discover(compiler_dir(config)));
  auto& events = as_json ? std::cerr : std::cout;
  const auto record = pipeline.run(entry, [&](const std::string& id, const PipelineEvent& e) {
    cli::print_event(events, id, e);
  });
  const auto json = record_to_json(record);
  if (!out.empty()) {
    fs::create_directories(out);
    std::ofstream(fs::path(out) / record_file_name(record.entry_id), std::ios::binary) << json;
  }
  if (as_json) std::cout << json;
  else cli::print_record(std::cout, record);
  return record.failed ? kProcessing : kOk;
}

int cmd_score(const Common& common, const std::string& contract_path, const std::string& schema_path,
              const std::string& gt_path, const std::string& fsm_path, bool as_json) {
  const auto config = build_config(common);
  const auto source = read_text(contract_path);
  const auto schema = schema_from_json(read_text(schema_path));
  std::optional<FsmSpec> fsm;
  if (!fsm_path.empty()) {
    fsm = fsm_from_json(read_text(fsm_path));
    if (!fsm) throw UsageError(fsm_path + " is not a state machine JSON object");
  }
  const auto parsed = parse_surface(source);
  for (const auto& w : parsed.warnings) std::cerr << contract_path << ":" << w.line << ": warning: " << w.message << "\n";
  const auto lint = lint_forbidden_patterns(parsed.surface, source);
  const auto report = evaluate_quality(schema, fsm ? &*fsm : nullptr, parsed.surface, source, lint, config.metrics);
  std::optional<PairedResult> paired;
  if (!gt_path.empty()) {
    const auto gt_source = read_text(gt_path);
    const auto gt = parse_surface(gt_source);
    const auto gt_lint = lint_forbidden_patterns(gt.surface, gt_source);
    paired = compare_pair(schema, fsm ? &*fsm : nullptr, parsed.surface, source, gt.surface, gt_source, lint, gt_lint,
                          config.metrics);
  }
  if (as_json) {
    std::cout << (paired ? paired_result_to_json(*paired) : quality_report_to_json(report)) << "\n";
    return kOk;
  }
  std::cout << "Contract " << parsed.surface.contract_name << "\n";
  cli::print_lint(std::cout, lint);
  cli::print_quality(std::cout, report);
  if (paired) cli::print_comparison(std::cout, *paired);
  return kOk;
}

int cmd_doctor(const Common& common) {
  const auto config = build_config(common);
  bool ok = true;
  const auto dir = compiler_dir(config);
  const auto compilers = CompilerSet::discover(dir);
  if (compilers.empty()) {
    ok = false;
    std::cout << "[FAIL] solc compilers: none in " << dir.string()
              << "\n       run scripts/install_solc.sh or set compiler_dir / SOLBENCH_SOLC_DIR\n";
  } else {
    std::cout << "[ OK ] solc compilers in " << dir.string() << ":";
    for (const auto& c : compilers.compilers()) std::cout << " " << c.version.str();
    std::cout << "\n";
    const auto probe = compile_check("pragma solidity >=0.4.0;\ncontract Probe {}\n", config.compile_timeout, compilers);
    if (probe.status == CompileStatus::Success) {
      std::cout << "[ OK ] test compile with " << probe.compiler_version << "\n";
    } else {
      ok = false;
      std::cout << "[FAIL] test compile: " << to_string(probe.status) << " " << probe.reason;
      for (const auto& d : probe.diagnostics) std::cout << " " << d.message;
      std::cout << "\n";
    }
  }
  if (config.provider == "scripted") {
    std::cout << "[SKIP] chat backend: scripted provider selected\n";
  } else {
    HttpChatBackend backend(config.http);
    if (auto problem = backend.probe()) {
      ok = false;
      std::cout << "[FAIL] chat backend " << config.http.base_url << ": " << *problem << "\n";
    } else {
      std::cout << "[ OK ] chat backend " << config.http.base_url << " (model " << config.model << ")\n";
    }
  }
  std::cout << "prompt version " << prompts::kVersion << "\n";
  return ok ? kOk : kEnvironment;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Generate, audit and score Solidity contracts from natural-language specifications"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "solbench 0.3.0");

  Common common;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", common.config_path, "key = value settings file");
    sub->add_option("--provider", common.provider, "Chat backend: http or scripted");
    sub->add_option("--script", common.script, "Scripted provider replies (JSON)");
    sub->add_option("--model", common.model, "Model name");
    sub->add_option("--max-refine", common.max_refine, "Maximum refinement iterations");
    sub->add_flag("--no-reinforcement", common.no_reinforcement, "Audit once, never refine");
    sub->add_flag("--no-compile", common.no_compile, "Skip the compiler gate");
    sub->add_option("--compiler-dir", common.compiler_dir, "Directory holding solc-X.Y.Z executables");
    sub->add_option("--set", common.sets, "Extra key=value setting (repeatable)");
  };

  std::string input, out, entry_id, spec, fsm, gt, contract, schema;
  int parallelism = 0;
  std::size_t limit = 0;
  bool resume = false, force = false, as_json = false, quiet = false;

  auto* batch = app.add_subcommand("batch", "Run the pipeline over a JSONL dataset");
  add_common(batch);
  batch->add_option("--input", input, "Dataset (JSONL)")->required();
  batch->add_option("--out", out, "Output directory")->required();
  batch->add_option("--parallelism", parallelism, "Concurrent pipeline runs")->check(CLI::PositiveNumber);
  batch->add_option("--limit", limit, "Process at most this many new entries");
  batch->add_flag("--resume", resume, "Skip entries already in the output index");
  batch->add_flag("--force", force, "Replace results in a non-empty output directory");
  batch->add_flag("--quiet", quiet, "Do not stream events");

  auto* single = app.add_subcommand("single", "Run the pipeline on one specification, streaming events");
  add_common(single);
  single->add_option("--input", input, "Dataset (JSONL) holding --entry");
  single->add_option("--entry", entry_id, "Entry id in the dataset");
  single->add_option("--spec", spec, "Specification text file");
  single->add_option("--fsm", fsm, "State machine JSON for --spec");
  single->add_option("--gt", gt, "Ground-truth Solidity for --spec");
  single->add_option("--out", out, "Also write the record into this directory");
  single->add_flag("--json", as_json, "Print the record as JSON");

  auto* score = app.add_subcommand("score", "Score an existing contract against a schema");
  add_common(score);
  score->add_option("--contract", contract, "Solidity source")->required();
  score->add_option("--schema", schema, "Contract schema JSON")->required();
  score->add_option("--gt", gt, "Ground-truth Solidity to compare against");
  score->add_option("--fsm", fsm, "State machine JSON");
  score->add_flag("--json", as_json, "Print JSON");

  auto* doctor = app.add_subcommand("doctor", "Check compilers and backend reachability");
  add_common(doctor);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (*batch) return cmd_batch(common, input, out, parallelism, resume, force, limit, quiet);
    if (*single) return cmd_single(common, input, entry_id, spec, fsm, gt, out, as_json);
    if (*score) return cmd_score(common, contract, schema, gt, fsm, as_json);
    if (*doctor) return cmd_doctor(common);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const MalformedSchema& e) {
    std::cerr << "error: schema: " << e.what() << "\n";
    return kUsage;
  } catch (const EnvironmentError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kEnvironment;
  } catch (const UnparseableSource& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kProcessing;
  } catch (const IoFailure& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kProcessing;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kProcessing;
  }
  return kUsage;
}
