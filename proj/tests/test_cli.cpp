#include <gtest/gtest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <sys/wait.h>
#include <unistd.h>

#include "robin/cli/config.hpp"
#include "robin/cli/report.hpp"
#include "robin/cli/run.hpp"
#include "robin/geometry.hpp"

using namespace robin::cli;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("robin_cli_" + std::to_string(::getpid())) / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path write_config(const fs::path& dir, json j) {
  const auto p = dir / "config.json";
  std::ofstream(p) << j.dump(2);
  return p;
}

json interval_config(const fs::path& out) {
  return {{"domain", {{"type", "interval"}}},
          {"backend", "exact1d"},
          {"alpha_grid", {100, 1000, 10000}},
          {"clusters", {1}},
          {"checks", {"expansion", "rates", "spectrum"}},
          {"output_dir", out.string()}};
}

std::string config_error(json j) {
  try {
    (void)parse_config(j);
  } catch (const ConfigError& e) {
    return e.path();
  }
  return "<accepted>";
}

int run_exe(const std::string& args) {
  const std::string cmd = std::string(ROBIN_LIMIT_EXE) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST(CliConfig, ParsesGeometricGrid) {
  auto j = interval_config("out");
  j["alpha_grid"] = {{"start", 10}, {"factor", 10}, {"count", 3}};
  const auto c = parse_config(j);
  ASSERT_EQ(c.alpha_grid.size(), 3u);
  EXPECT_DOUBLE_EQ(c.alpha_grid[0], 10);
  EXPECT_DOUBLE_EQ(c.alpha_grid[2], 1000);
  EXPECT_EQ(c.seed, 42u);
  // canonical check order
  EXPECT_EQ(c.checks, (std::vector<std::string>{"spectrum", "expansion", "rates"}));
}

TEST(CliConfig, ErrorsNameTheField) {
  const auto base = interval_config("out");
  auto j = base;
  j["domain"]["foo"] = 1;
  EXPECT_EQ(config_error(j), "domain.foo");
  j = base;
  j["alpha_grid"] = {{"start", 10}, {"factor", 10}, {"count", 0}};
  EXPECT_EQ(config_error(j), "alpha_grid.count");
  j = base;
  j["alpha_grid"] = {10, 5};
  EXPECT_EQ(config_error(j), "alpha_grid[1]");
  j = base;
  j["checks"] = {"spectrum", "bogus"};
  EXPECT_EQ(config_error(j), "checks[1]");
  j = base;
  j.erase("backend");
  EXPECT_EQ(config_error(j), "backend");
  j = base;
  j["clusters"] = {1, 0};
  EXPECT_EQ(config_error(j), "clusters[1]");
  j = base;
  j["seed"] = -4;
  EXPECT_EQ(config_error(j), "seed");
}

TEST(CliConfig, BackendDomainMismatch) {
  auto j = interval_config("out");
  j["backend"] = "fem";
  j["mesh_h"] = 0.1;
  EXPECT_EQ(config_error(j), "backend");
  j = interval_config("out");
  j["domain"] = {{"type", "rectangle"}, {"l", 1}, {"L", 1}};
  j["backend"] = "fem";
  EXPECT_EQ(config_error(j), "mesh_h");
  j["backend"] = "separable";
  j["checks"] = {"torsion_bounds"};
  EXPECT_EQ(config_error(j), "checks[0]");
  j["checks"] = {"splitting"};
  EXPECT_EQ(config_error(j), "<accepted>");
  j["domain"] = {{"type", "disk"}, {"R", 1}};
  EXPECT_EQ(config_error(j), "checks[0]");
}

TEST(CliConfig, HashIgnoresOutputDir) {
  auto a = parse_config(interval_config("x"));
  auto b = parse_config(interval_config("y"));
  EXPECT_EQ(config_hash(a), config_hash(b));
  auto j = interval_config("x");
  j["seed"] = 7;
  EXPECT_NE(config_hash(parse_config(j)), config_hash(a));
  EXPECT_EQ(config_hash_hex(a).size(), 16u);
}

TEST(CliReport, CsvQuoting) {
  ReportRow r;
  r.check = "spectrum";
  r.n = 1;
  r.alpha = 10.0;
  r.observed = 1.5;
  r.predicted = 2.0;
  r.residual = -0.5;
  r.note = "a, \"b\"";
  std::ostringstream out;
  write_csv(out, {r});
  EXPECT_EQ(out.str(),
            "check,n,i,alpha,observed,predicted,residual,slope,status,note\n"
            "spectrum,1,,10,1.5,2,-0.5,,pass,\"a, \"\"b\"\"\"\n");
  const auto back = row_from_json(to_json(r));
  EXPECT_EQ(back.note, r.note);
  EXPECT_EQ(*back.alpha, 10.0);
  EXPECT_FALSE(back.i.has_value());
}

TEST(CliExplain, Anchors) {
  EXPECT_NE(explain_text("expansion")->find("Theorem 1.1"), std::string::npos);
  EXPECT_NE(explain_text("monotonicity")->find("Lemma 3.3"), std::string::npos);
  for (const auto& id : known_checks()) EXPECT_TRUE(explain_text(id).has_value()) << id;
  std::ostringstream out;
  std::ostringstream err;
  EXPECT_EQ(explain_command("bogus", out, err), kExitUsage);
  for (const auto& id : known_checks()) EXPECT_NE(err.str().find(id), std::string::npos);
}

TEST(CliRun, IntervalExpansionPasses) {
  const auto dir = scratch("interval");
  const auto cfg = write_config(dir, interval_config(dir / "out"));
  std::ostringstream out;
  std::ostringstream err;
  ASSERT_EQ(run_command(cfg, out, err), kExitOk) << out.str() << err.str();
  const auto report = json::parse(slurp(dir / "out" / "report.json"));
  EXPECT_EQ(report["counts"]["fail"], 0);
  EXPECT_EQ(report["seed"], 42);
  bool slope_row = false;
  for (const auto& r : report["rows"]) {
    if (r["check"] == "rates" && !r["slope"].is_null()) {
      slope_row = true;
      EXPECT_NEAR(r["slope"].get<double>(), -2.0, 0.1);
    }
  }
  EXPECT_TRUE(slope_row);
}

TEST(CliRun, ReportIsByteIdentical) {
  const auto dir = scratch("repeat");
  const auto cfg = write_config(dir, interval_config(dir / "out"));
  std::ostringstream sink;
  ASSERT_EQ(run_command(cfg, sink, sink), kExitOk);
  const auto first = slurp(dir / "out" / "report.csv");
  // cached rerun
  ASSERT_EQ(run_command(cfg, sink, sink), kExitOk);
  EXPECT_EQ(slurp(dir / "out" / "report.csv"), first);
  // cold rerun
  fs::remove_all(dir / "out");
  ASSERT_EQ(run_command(cfg, sink, sink), kExitOk);
  EXPECT_EQ(slurp(dir / "out" / "report.csv"), first);
  EXPECT_FALSE(fs::is_empty(dir / "out" / ".cache"));
}

TEST(CliRun, CacheEnvOverride) {
  const auto dir = scratch("cache_env");
  const auto cfg = write_config(dir, interval_config(dir / "out"));
  ::setenv("ROBIN_LIMIT_CACHE", (dir / "shared").c_str(), 1);
  std::ostringstream sink;
  const int code = run_command(cfg, sink, sink);
  ::unsetenv("ROBIN_LIMIT_CACHE");
  ASSERT_EQ(code, kExitOk);
  EXPECT_TRUE(fs::exists(dir / "shared"));
  EXPECT_FALSE(fs::exists(dir / "out" / ".cache"));
}

TEST(CliRun, RectangleSplitting) {
  const auto dir = scratch("split");
  json j = {{"domain", {{"type", "rectangle"}, {"l", 1}, {"L", 2}}},
            {"backend", "separable"},
            {"alpha_grid", {{"start", 10}, {"factor", 10}, {"count", 4}}},
            {"clusters", {5}},
            {"checks", {"splitting"}},
            {"output_dir", (dir / "out").string()}};
  std::ostringstream sink;
  ASSERT_EQ(run_command(write_config(dir, j), sink, sink), kExitOk) << sink.str();
  const auto report = json::parse(slurp(dir / "out" / "report.json"));
  double last_gap = 0.0;
  for (const auto& r : report["rows"]) {
    if (r["alpha"].is_number() && r["alpha"].get<double>() == 1e4) last_gap = r["observed"].get<double>();
  }
  EXPECT_NEAR(last_gap, 6 * M_PI * M_PI, 0.02 * 6 * M_PI * M_PI);
}

TEST(CliRun, FemOutsideWindowWarns) {
  const auto dir = scratch("window");
  json j = {{"domain", {{"type", "rectangle"}, {"l", 1}, {"L", 1}}},
            {"backend", "fem"},
            {"mesh_h", 0.2},
            {"alpha_grid", {0.25, 0.5, 1, 2}},
            {"checks", {"spectrum"}},
            {"output_dir", (dir / "out").string()}};
  std::ostringstream out;
  std::ostringstream err;
  ASSERT_EQ(run_command(write_config(dir, j), out, err), kExitOk) << out.str();
  const auto report = json::parse(slurp(dir / "out" / "report.json"));
  EXPECT_GT(report["counts"]["warn"].get<int>(), 0);
  EXPECT_FALSE(report["warnings"].empty());
  for (const auto& r : report["rows"]) {
    if (r["alpha"].is_number() && r["alpha"].get<double>() > 0.5) { EXPECT_EQ(r["status"], "warn"); }
  }
  EXPECT_NE(out.str().find("warnings:"), std::string::npos);
}

TEST(CliRun, BadConfigIsUsageError) {
  const auto dir = scratch("bad");
  auto j = interval_config(dir / "out");
  j["backend"] = "fem";
  std::ostringstream out;
  std::ostringstream err;
  EXPECT_EQ(run_command(write_config(dir, j), out, err), kExitUsage);
  EXPECT_NE(err.str().find("config"), std::string::npos);
  EXPECT_EQ(run_command(dir / "missing.json", out, err), kExitUsage);
  std::ofstream(dir / "broken.json") << "{ not json";
  EXPECT_EQ(run_command(dir / "broken.json", out, err), kExitUsage);
}

TEST(CliExe, Subcommands) {
  const auto dir = scratch("exe");
  EXPECT_EQ(run_exe("explain expansion"), 0);
  EXPECT_EQ(run_exe("explain bogus"), 2);
  EXPECT_EQ(run_exe("frobnicate"), 2);
  const auto mesh = dir / "square.mesh";
  ASSERT_EQ(run_exe("mesh --rectangle 1 1 --h 0.5 -o " + mesh.string()), 0);
  const auto m = robin::load_mesh(mesh);
  EXPECT_EQ(m.nodes.size(), 9u);
  EXPECT_EQ(m.triangles.size(), 8u);
  ASSERT_EQ(run_exe("mesh --disk 1 --h 0.3 --refine 1 -o " + (dir / "disk.mesh").string()), 0);
  EXPECT_EQ(run_exe("mesh --polygon \"0,0 0,1 1,1 1,0\" --h 0.3 -o " + (dir / "cw.mesh").string()), 2);
  const auto cfg = write_config(dir, interval_config(dir / "out"));
  EXPECT_EQ(run_exe("run " + cfg.string()), 0);
}
