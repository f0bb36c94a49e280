#include "robin/cli/run.hpp"

#include <cstdlib>
#include <fstream>
#include <future>
#include <ostream>
#include <sstream>
#include <thread>
#include <unistd.h>

#include "robin/cli/checks.hpp"
#include "robin/cli/config.hpp"
#include "robin/cli/report.hpp"

namespace robin::cli {

using nlohmann::json;

std::filesystem::path cache_root(const std::filesystem::path& output_dir) {
  if (const char* env = std::getenv("ROBIN_LIMIT_CACHE"); env && *env) return env;
  return output_dir / ".cache";
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".tmp." + std::to_string(::getpid()) + "." +
         std::to_string(std::hash<std::thread::id>{}(std::this_thread::get_id()));
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw Error("cannot write '" + tmp.string() + "'");
    out << content;
    out.close();
    if (!out) throw Error("failed writing '" + tmp.string() + "'");
  }
  std::filesystem::rename(tmp, path);
}

namespace {

std::optional<std::vector<ReportRow>> load_cached(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) return std::nullopt;
  try {
    const auto j = json::parse(in);
    std::vector<ReportRow> rows;
    for (const auto& r : j.at("rows")) rows.push_back(row_from_json(r));
    return rows;
  } catch (const std::exception&) {
    return std::nullopt;  // unreadable entry: recompute
  }
}

void apply_window(const RunConfig& config, std::vector<ReportRow>& rows) {
  for (auto& r : rows) {
    if (r.alpha && config.outside_window(*r.alpha) && r.status != Status::warn) {
      r.status = Status::warn;
      r.note += "; alpha > 0.1/h: outside the FEM validity window";
    }
  }
}

}  // namespace

int run_command(const std::filesystem::path& config_path, std::ostream& out, std::ostream& err) {
  RunConfig config;
  try {
    config = load_config(config_path);
  } catch (const ConfigError& e) {
    err << "robin-limit: " << e.what() << '\n';
    return kExitUsage;
  }
  const std::string hash = config_hash_hex(config);
  const auto cache_dir = cache_root(config.output_dir) / hash;
  std::vector<std::string> warnings;
  if (config.backend == Backend::fem && config.outside_window(config.alpha_grid.back())) {
    warnings.push_back("alpha_max = " + std::to_string(config.alpha_grid.back()) + " exceeds 0.1/mesh_h = " +
                       std::to_string(0.1 / *config.mesh_h) + "; rows above the window are reported as warn");
  }

  Context ctx(config);
  std::vector<std::future<std::vector<ReportRow>>> tasks;
  for (const auto& id : config.checks) {
    tasks.push_back(std::async(std::launch::async, [&ctx, &config, id, cache_dir] {
      const auto file = cache_dir / (id + ".json");
      if (auto cached = load_cached(file)) return *cached;
      std::vector<ReportRow> rows;
      try {
        rows = run_check(id, ctx);
      } catch (const std::exception& e) {
        ReportRow r;
        r.check = id;
        r.status = Status::fail;
        r.note = std::string("error: ") + e.what();
        return std::vector<ReportRow>{r};  // not cached: rerun retries
      }
      apply_window(config, rows);
      json j;
      j["check"] = id;
      j["rows"] = json::array();
      for (const auto& r : rows) j["rows"].push_back(to_json(r));
      write_file_atomic(file, j.dump(1) + "\n");
      return rows;
    }));
  }
  std::vector<ReportRow> rows;
  for (auto& t : tasks) {
    auto part = t.get();
    rows.insert(rows.end(), part.begin(), part.end());
  }

  std::ostringstream csv;
  write_csv(csv, rows);
  const auto counts = count_status(rows);
  json report;
  report["config"] = config.source;
  report["config_hash"] = hash;
  report["seed"] = config.seed;
  report["counts"] = {{"pass", counts.pass}, {"warn", counts.warn}, {"fail", counts.fail}};
  report["warnings"] = warnings;
  report["rows"] = json::array();
  for (const auto& r : rows) report["rows"].push_back(to_json(r));
  try {
    write_file_atomic(config.output_dir / "report.csv", csv.str());
    write_file_atomic(config.output_dir / "report.json", report.dump(1) + "\n");
  } catch (const std::exception& e) {
    err << "robin-limit: " << e.what() << '\n';
    return kExitUsage;
  }

  for (const auto& w : warnings) err << "warning: " << w << '\n';
  out << rows.size() << " rows: " << counts.pass << " pass, " << counts.warn << " warn, " << counts.fail << " fail\n";
  if (counts.warn > 0) out << "warnings: " << counts.warn << '\n';
  for (const auto& r : rows) {
    if (r.status == Status::fail) out << "FAIL " << r.check << ": " << r.note << '\n';
  }
  out << "report: " << (config.output_dir / "report.csv").string() << '\n';
  return counts.fail > 0 ? kExitCheckFailure : kExitOk;
}

}  // namespace robin::cli
