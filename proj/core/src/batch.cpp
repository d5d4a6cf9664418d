#include <algorithm>
#include <fstream>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "json_util.hpp"
#include "solbench/digest.hpp"
#include "solbench/error.hpp"
#include "solbench/pipeline.hpp"

namespace solbench {

namespace fs = std::filesystem;
using detail::json;

std::string record_file_name(std::string_view entry_id) {
  std::string safe;
  for (char c : entry_id) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '-' ||
                    c == '_' || c == '.';
    safe.push_back(ok ? c : '_');
  }
  if (safe.size() > 80) safe.resize(80);
  const bool altered = safe != entry_id || safe.empty() || safe.front() == '.';
  if (altered) safe = (safe.empty() || safe.front() == '.' ? "_" + safe : safe) + "-" + sha256_hex(entry_id).substr(0, 10);
  return safe + ".json";
}

namespace {

void write_atomic(const fs::path& path, std::string_view data) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoFailure("cannot write " + tmp.string());
    out.write(data.data(), static_cast<std::streamsize>(data.size()));
    out.flush();
    if (!out) throw IoFailure("cannot write " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) throw IoFailure("cannot move " + tmp.string() + " into place: " + ec.message());
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoFailure("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Ids listed in the index whose record file is present.
std::set<std::string> finished_ids(const fs::path& dir) {
  std::set<std::string> out;
  std::ifstream in(dir / "index.jsonl");
  std::string line;
  while (std::getline(in, line)) {
    const auto j = detail::try_parse(line);
    // A torn last line from a killed run is ignored; that entry reruns.
    if (!j || !j->is_object() || !j->contains("entry_id") || !(*j)["entry_id"].is_string()) continue;
    const auto id = (*j)["entry_id"].get<std::string>();
    if (fs::exists(dir / "records" / record_file_name(id))) out.insert(id);
  }
  return out;
}

/// The index as appended during a run is in completion order; a finished run
/// rewrites it sorted by id, one line per finished entry.
std::string canonical_index(const fs::path& dir) {
  std::map<std::string, std::string> lines;
  std::ifstream in(dir / "index.jsonl");
  std::string line;
  while (std::getline(in, line)) {
    const auto j = detail::try_parse(line);
    if (!j || !j->is_object() || !j->contains("entry_id") || !(*j)["entry_id"].is_string()) continue;
    const auto id = (*j)["entry_id"].get<std::string>();
    if (fs::exists(dir / "records" / record_file_name(id))) lines[id] = j->dump();
  }
  std::string out;
  for (const auto& [_, l] : lines) out += l + "\n";
  return out;
}

bool ends_without_newline(const fs::path& path) {
  std::ifstream in(path, std::ios::binary | std::ios::ate);
  if (!in || in.tellg() <= 0) return false;
  in.seekg(-1, std::ios::end);
  return in.get() != '\n';
}

}  // namespace

BatchResult run_batch(JsonlReader& entries, const Pipeline& pipeline, const BatchOptions& options) {
  const auto& dir = options.output_dir;
  std::error_code ec;
  fs::create_directories(dir / "records", ec);
  if (ec) throw IoFailure("cannot create " + (dir / "records").string() + ": " + ec.message());

  BatchResult result;
  std::set<std::string> done = options.resume ? finished_ids(dir) : std::set<std::string>{};
  const bool torn = options.resume && ends_without_newline(dir / "index.jsonl");
  std::ofstream index(dir / "index.jsonl", options.resume ? std::ios::app : std::ios::trunc);
  if (!index) throw IoFailure("cannot write " + (dir / "index.jsonl").string());
  if (torn) index << '\n';

  std::mutex input_mutex;
  std::mutex sink_mutex;
  std::mutex event_mutex;
  std::set<std::string> seen;
  std::size_t started = 0;
  std::vector<std::string> order;
  std::exception_ptr fatal;

  EventCallback on_event;
  if (options.on_event) {
    on_event = [&](const std::string& id, const PipelineEvent& ev) {
      std::lock_guard lock(event_mutex);
      options.on_event(id, ev);
    };
  }

  auto next_entry = [&]() -> std::optional<BenchmarkEntry> {
    std::lock_guard lock(input_mutex);
    while (!fatal) {
      if (options.limit && started >= options.limit) return std::nullopt;
      auto item = entries.next();
      if (!item) return std::nullopt;
      if (auto* err = std::get_if<LineError>(&*item)) {
        result.line_errors.push_back(*err);
        continue;
      }
      auto entry = std::get<BenchmarkEntry>(std::move(*item));
      if (!seen.insert(entry.id).second) {
        result.line_errors.push_back({entries.lines_read(), "duplicate entry id '" + entry.id + "'"});
        continue;
      }
      if (done.count(entry.id)) {
        ++result.skipped;
        continue;
      }
      ++started;
      return entry;
    }
    return std::nullopt;
  };

  auto worker = [&] {
    while (auto entry = next_entry()) {
      try {
        const auto record = pipeline.run(*entry, on_event);
        const auto file = record_file_name(entry->id);
        write_atomic(dir / "records" / file, record_to_json(record));
        json line = {{"entry_id", entry->id},
                     {"file", "records/" + file},
                     {"failed", record.failed},
                     {"composite", record.quality.composite},
                     {"grade", to_string(record.quality.grade)}};
        std::lock_guard lock(sink_mutex);
        index << line.dump() << '\n';
        index.flush();
        if (!index) throw IoFailure("cannot append to " + (dir / "index.jsonl").string());
        ++result.processed;
        if (record.failed) ++result.failed;
      } catch (...) {
        std::lock_guard lock(input_mutex);
        if (!fatal) fatal = std::current_exception();
        return;
      }
    }
  };

  const int threads = std::max(1, options.parallelism);
  std::vector<std::thread> pool;
  for (int i = 1; i < threads; ++i) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (fatal) std::rethrow_exception(fatal);
  index.close();
  write_atomic(dir / "index.jsonl", canonical_index(dir));

  // The summary covers every finished record, including ones from earlier runs.
  std::vector<RecordStats> stats;
  for (const auto& id : finished_ids(dir)) {
    stats.push_back(record_stats_from_json(read_file(dir / "records" / record_file_name(id))));
  }
  result.summary = summarize(stats, result.line_errors.size(), pipeline.config().metrics);
  write_atomic(dir / "summary.json", render_report(result.summary, ReportFormat::Json));
  write_atomic(dir / "summary.md", render_report(result.summary, ReportFormat::Markdown));
  return result;
}

}  // namespace solbench
