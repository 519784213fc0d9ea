#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "app/commands.hpp"
#include "app/config.hpp"
#include "app/records.hpp"
#include "perisolve/error.hpp"

using namespace perisolve;
using namespace perisolve::app;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("perisolve_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::string config_error(std::string_view text) {
  try {
    parse_config(text, "test.cfg");
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::config);
    return e.what();
  }
  ADD_FAILURE() << "no error for:\n" << text;
  return {};
}

constexpr const char* kBasic =
    "# 2D bump\n"
    "name = bump64\n"
    "equation = helmholtz\n"
    "d = 2\n"
    "n = 64   # edge length\n"
    "field = gaussian_bump\n";

int run(std::initializer_list<const char*> args) {
  std::vector<const char*> argv = {"perisolve"};
  argv.insert(argv.end(), args);
  return run_cli(static_cast<int>(argv.size()), argv.data());
}

}  // namespace

TEST(Config, ParsesWithDefaults) {
  const RunConfig cfg = parse_config(kBasic);
  EXPECT_EQ(cfg.name, "bump64");
  EXPECT_EQ(cfg.experiment.problem.equation, Equation::helmholtz);
  EXPECT_EQ(cfg.experiment.problem.n, 64);
  EXPECT_EQ(cfg.experiment.t_max, 2);
  EXPECT_EQ(cfg.experiment.leaf, 8);
  EXPECT_DOUBLE_EQ(cfg.experiment.gmres.tol, 1e-6);
  EXPECT_EQ(cfg.experiment.gmres.restart, 40);
  EXPECT_TRUE(cfg.snapshots);
}

TEST(Config, ErrorsNameKeyAndLine) {
  EXPECT_NE(config_error("d = 2\nn = 64\nfield = cross\n").find("'equation'"), std::string::npos);
  const std::string unknown = config_error(std::string(kBasic) + "colour = red\n");
  EXPECT_NE(unknown.find("test.cfg:7"), std::string::npos) << unknown;
  EXPECT_NE(unknown.find("'colour'"), std::string::npos);
  EXPECT_NE(config_error(std::string(kBasic) + "tol = tiny\n").find("'tol'"), std::string::npos);
  EXPECT_NE(config_error(std::string(kBasic) + "n = 32\n").find("duplicate"), std::string::npos);
  EXPECT_NE(config_error("equation = helmholtz\nd = 2\nn = 64\nfield = lattice_vacancy\n")
                .find("'field'"),
            std::string::npos);
  EXPECT_NE(config_error("equation = helmholtz\nd 2\n").find(":2"), std::string::npos);
}

TEST(Config, EchoRoundTrips) {
  RunConfig cfg = parse_config(std::string(kBasic) + "seed = 7\ntol = 1e-8\nsnapshots = false\n");
  const RunConfig again = parse_config(format_config(cfg));
  EXPECT_EQ(format_config(again), format_config(cfg));
  EXPECT_EQ(again.experiment.problem.seed, 7u);
  EXPECT_DOUBLE_EQ(again.experiment.gmres.tol, 1e-8);
  EXPECT_FALSE(again.snapshots);
  EXPECT_EQ(again.experiment.shift_count, 4);
}

TEST(Records, SnapshotRoundTrip) {
  const fs::path dir = scratch("snap");
  const GridSpec g = make_grid(2, 8);
  std::vector<double> v(64);
  for (int i = 0; i < 64; ++i) v[i] = i * 0.1 - 3.0;
  write_snapshot(dir / "v.bin", g, v);
  const std::string raw = slurp(dir / "v.bin");
  EXPECT_EQ(raw.substr(0, raw.find('\n') + 1), "2 8 64\n");
  EXPECT_EQ(raw.size(), std::string("2 8 64\n").size() + 64 * 8);
  const Snapshot s = read_snapshot(dir / "v.bin");
  EXPECT_EQ(s.d, 2);
  EXPECT_EQ(s.n, 8);
  EXPECT_EQ(s.values, v);
}

TEST(Bench, LadderSlices) {
  EXPECT_EQ(suite_ladder("2DHi", 128), (std::vector<int>{64, 128}));
  EXPECT_EQ(suite_ladder("3DSii", 32), (std::vector<int>{16, 32}));
  EXPECT_EQ(suite_ladder("2DSii"), (std::vector<int>{64, 128, 256}));
  EXPECT_EQ(suite_ladder("3DHi"), (std::vector<int>{16, 32}));
  EXPECT_THROW(suite_ladder("2DHi", 32), Error);
  EXPECT_THROW(suite_ladder("4DHi", 32), Error);
}

TEST(Bench, RowsCarryTimings) {
  const fs::path dir = scratch("bench");
  const auto records = cmd_bench("2DHi", 64, {}, dir);
  ASSERT_EQ(records.size(), 1u);
  const RunRecord& r = records[0];
  EXPECT_EQ(r.shift_count, 4);
  EXPECT_EQ(r.unknowns, 4096);
  EXPECT_TRUE(r.report.converged);
  EXPECT_GT(r.report.timings.stencil, 0.0);
  EXPECT_GT(r.report.timings.nd_setup, 0.0);
  EXPECT_GT(r.report.timings.nd_solve, 0.0);
  std::ifstream csv(dir / "2DHi.csv");
  std::string header, row;
  std::getline(csv, header);
  std::getline(csv, row);
  EXPECT_EQ(header.rfind("schema,", 0), 0u);
  EXPECT_EQ(row.rfind(kRunSchema, 0), 0u);
}

TEST(Solve, RecordAndDeterminism) {
  const fs::path dir = scratch("solve");
  const RunConfig cfg = parse_config(kBasic);
  const RunRecord a = cmd_solve(cfg, dir / "a");
  const RunRecord b = cmd_solve(cfg, dir / "b");
  EXPECT_EQ(a.shift_count, 4);
  EXPECT_EQ(a.unknowns, 4096);
  EXPECT_EQ(a.report.iterations, b.report.iterations);
  EXPECT_EQ(slurp(a.solution_path), slurp(b.solution_path));
  EXPECT_EQ(slurp(a.potential_path), slurp(b.potential_path));
  EXPECT_TRUE(fs::exists(dir / "a" / "bump64.csv"));

  // the echoed config re-runs the same experiment
  std::ifstream csv(dir / "a" / "bump64.csv");
  std::string header, row;
  std::getline(csv, header);
  std::getline(csv, row);
  const auto q = row.find('"');
  std::string echo = row.substr(q + 1, row.rfind('"') - q - 1);
  for (auto pos = echo.find("; "); pos != std::string::npos; pos = echo.find("; "))
    echo.replace(pos, 2, "\n");
  EXPECT_EQ(format_config(parse_config(echo)), format_config(a.config));
}

TEST(QgProfile, DefaultInvocation) {
  const auto prof = cmd_qg_profile({});
  ASSERT_EQ(prof.size(), 32u);
  for (const auto& e : prof) EXPECT_EQ(e.reserved, e.column >= 15 && e.column <= 17);
  std::ostringstream os;
  write_profile_csv(os, prof);
  std::istringstream in(os.str());
  std::string line;
  int rows = 0;
  std::getline(in, line);
  EXPECT_EQ(line.rfind("# schema:", 0), 0u);
  std::getline(in, line);
  EXPECT_EQ(line, "column_index,magnitude,reserved_flag");
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, 32);
}

TEST(Cli, ExitCodes) {
  const fs::path dir = scratch("exit");
  std::ofstream(dir / "ok.cfg") << kBasic;
  std::ofstream(dir / "bad.cfg") << "equation = helmholtz\nd = 2\n";
  std::ofstream(dir / "odd.cfg") << "equation = helmholtz\nd = 2\nn = 63\nfield = cross\n";
  std::ofstream(dir / "slow.cfg") << kBasic << "maxit = 1\ntol = 1e-14\n";
  const std::string ok = (dir / "ok.cfg").string(), bad = (dir / "bad.cfg").string(),
                    odd = (dir / "odd.cfg").string(), slow = (dir / "slow.cfg").string(),
                    out = (dir / "out").string(), missing = (dir / "nope.cfg").string();
  EXPECT_EQ(run({"solve", "--config", ok.c_str(), "--out", out.c_str()}), 0);
  EXPECT_EQ(run({"solve", "--config", bad.c_str(), "--out", out.c_str()}), 2);
  EXPECT_EQ(run({"solve", "--config", odd.c_str(), "--out", out.c_str()}), 2);
  EXPECT_EQ(run({"solve", "--config", slow.c_str(), "--out", out.c_str()}), 1);
  EXPECT_EQ(run({"solve", "--config", missing.c_str(), "--out", out.c_str()}), 4);
  EXPECT_EQ(run({"fields", "--config", ok.c_str(), "--out", out.c_str()}), 0);
  EXPECT_TRUE(fs::exists(dir / "out" / "bump64_v.bin"));
  EXPECT_EQ(run({"bench", "--suite", "nope"}), 2);
  EXPECT_EQ(run({"frobnicate"}), 2);
  EXPECT_EQ(exit_code(ErrorKind::singular), 3);
  EXPECT_EQ(exit_code(ErrorKind::resonance), 3);
}
