#include "app/commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>

#include <CLI11.hpp>

#include "perisolve/error.hpp"
#include "perisolve/stencil.hpp"

namespace perisolve::app {

namespace fs = std::filesystem;

namespace {

struct SuiteSpec {
  std::string_view name;
  Equation equation;
  FieldKind field;
  int d;
};

constexpr SuiteSpec kSuites[] = {
    {"2DHi", Equation::helmholtz, FieldKind::gaussian_bump, 2},
    {"2DHii", Equation::helmholtz, FieldKind::cross, 2},
    {"3DHi", Equation::helmholtz, FieldKind::gaussian_bump, 3},
    {"3DHii", Equation::helmholtz, FieldKind::cross, 3},
    {"2DSi", Equation::schrodinger, FieldKind::random_gaussians, 2},
    {"2DSii", Equation::schrodinger, FieldKind::lattice_vacancy, 2},
    {"3DSi", Equation::schrodinger, FieldKind::random_gaussians, 3},
    {"3DSii", Equation::schrodinger, FieldKind::lattice_vacancy, 3},
};

const SuiteSpec& find_suite(std::string_view name) {
  for (const auto& s : kSuites)
    if (s.name == name) return s;
  std::string known;
  for (const auto& s : kSuites) known += std::string(known.empty() ? "" : ", ") + std::string(s.name);
  throw Error(ErrorKind::config, "unknown suite '" + std::string(name) + "' (known: " + known + ")");
}

void ensure_directory(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorKind::io, "cannot create directory " + dir.string() + ": " + ec.message());
}

}  // namespace

void apply_overrides(RunConfig& cfg, const Overrides& o) {
  if (o.seed) cfg.experiment.problem.seed = *o.seed;
  if (o.tol) cfg.experiment.gmres.tol = *o.tol;
  if (o.restart) cfg.experiment.gmres.restart = *o.restart;
  if (o.t_max) cfg.experiment.t_max = *o.t_max;
  if (o.leaf) cfg.experiment.leaf = *o.leaf;
}

RunRecord cmd_solve(const RunConfig& cfg, const fs::path& out_dir) {
  const ExperimentResult result = run_experiment(cfg.experiment);
  RunRecord rec = make_record(cfg, result);
  ensure_directory(out_dir);
  if (cfg.snapshots) {
    rec.solution_path = out_dir / (cfg.name + "_u.bin");
    rec.potential_path = out_dir / (cfg.name + "_v.bin");
    write_snapshot(rec.solution_path, result.grid, result.solution);
    write_snapshot(rec.potential_path, result.grid, result.potential);
  }
  write_runs_csv(out_dir / (cfg.name + ".csv"), {rec});
  return rec;
}

RunConfig suite_config(std::string_view suite, int n) {
  const SuiteSpec& s = find_suite(suite);
  RunConfig cfg;
  cfg.name = std::string(s.name) + "_n" + std::to_string(n);
  cfg.snapshots = false;
  cfg.experiment.problem.equation = s.equation;
  cfg.experiment.problem.field = s.field;
  cfg.experiment.problem.d = s.d;
  cfg.experiment.problem.n = n;
  return cfg;
}

std::vector<int> suite_ladder(std::string_view suite, int max_n) {
  const SuiteSpec& s = find_suite(suite);
  const std::vector<int> full = s.d == 2 ? std::vector<int>{64, 128, 256, 512}
                                         : std::vector<int>{16, 32, 64, 128};
  if (max_n <= 0) max_n = s.d == 2 ? 256 : 32;
  std::vector<int> ladder;
  std::copy_if(full.begin(), full.end(), std::back_inserter(ladder),
               [&](int n) { return n <= max_n; });
  if (ladder.empty())
    throw Error(ErrorKind::config, "--max-n " + std::to_string(max_n) + " is below the smallest " +
                                       std::string(suite) + " size " + std::to_string(full.front()));
  return ladder;
}

std::vector<RunRecord> cmd_bench(std::string_view suite, int max_n, const Overrides& overrides,
                                 const std::optional<fs::path>& out_dir) {
  std::vector<RunRecord> records;
  for (int n : suite_ladder(suite, max_n)) {
    RunConfig cfg = suite_config(suite, n);
    apply_overrides(cfg, overrides);
    RunRecord rec = make_record(cfg, run_experiment(cfg.experiment));
    rec.suite = std::string(suite);
    records.push_back(std::move(rec));
  }
  if (out_dir) {
    ensure_directory(*out_dir);
    write_runs_csv(*out_dir / (std::string(suite) + ".csv"), records);
  }
  return records;
}

std::vector<ProfileEntry> cmd_qg_profile(const ProfileRequest& req) {
  return qg_row_profile(make_grid(req.d, req.n), req.shift, req.t, req.j);
}

fs::path cmd_fields(const RunConfig& cfg, const fs::path& out_dir) {
  const ProblemConfig& p = cfg.experiment.problem;
  const RealField v = make_potential(p);
  ensure_directory(out_dir);
  const fs::path path = out_dir / (cfg.name + "_v.bin");
  write_snapshot(path, make_grid(p.d, p.n), v);
  return path;
}

int exit_code(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::config:
    case ErrorKind::invalid_argument:
      return 2;
    case ErrorKind::shape_mismatch:
    case ErrorKind::resonance:
    case ErrorKind::singular:
    case ErrorKind::breakdown:
      return 3;
    case ErrorKind::io:
      return 4;
  }
  return 3;
}

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"Sparsifying-preconditioned solver for periodic Helmholtz and Schrodinger problems",
               "perisolve"};
  app.require_subcommand(1);

  Overrides overrides;
  auto add_overrides = [&](CLI::App* sub) {
    sub->add_option("--seed", overrides.seed, "Random seed for the Schrodinger fields");
    sub->add_option("--tol", overrides.tol, "GMRES relative tolerance (default 1e-6)");
    sub->add_option("--restart", overrides.restart, "GMRES restart length (default 40)");
    sub->add_option("--t-max", overrides.t_max, "Largest stencil radius (default 2)");
    sub->add_option("--leaf", overrides.leaf, "Separator spacing B (default 8)");
  };

  std::string config_path;
  std::string out_dir = "out";
  auto* solve = app.add_subcommand("solve", "Solve one configured problem");
  solve->add_option("--config", config_path, "Config file (key = value)")->required();
  solve->add_option("--out", out_dir, "Output directory");
  add_overrides(solve);

  std::string suite;
  int max_n = 0;
  std::optional<std::string> bench_out;
  auto* bench = app.add_subcommand("bench", "Run a benchmark suite over its size ladder");
  bench->add_option("--suite", suite, "One of 2DHi 2DHii 3DHi 3DHii 2DSi 2DSii 3DSi 3DSii")
      ->required();
  bench->add_option("--max-n", max_n, "Largest edge length (default 256 in 2D, 32 in 3D)");
  bench->add_option("--out", bench_out, "Directory for <suite>.csv");
  add_overrides(bench);

  ProfileRequest profile;
  double shift_over_pi2 = -62.0;
  std::optional<std::string> profile_out;
  auto* qg = app.add_subcommand("qg-profile", "Row magnitude profile of Q G_s");
  qg->add_option("--d", profile.d, "Dimension")->capture_default_str();
  qg->add_option("--n", profile.n, "Edge length")->capture_default_str();
  qg->add_option("--s", shift_over_pi2, "Shift in units of pi^2")->capture_default_str();
  qg->add_option("--t", profile.t, "Stencil radius")->capture_default_str();
  qg->add_option("--j", profile.j, "Row index")->capture_default_str();
  qg->add_option("--out", profile_out, "Directory for qg_profile.csv (stdout if omitted)");

  std::string fields_out = "out";
  auto* fields = app.add_subcommand("fields", "Export the potential snapshot of a config");
  fields->add_option("--config", config_path, "Config file (key = value)")->required();
  fields->add_option("--out", fields_out, "Output directory");
  fields->add_option("--seed", overrides.seed, "Random seed for the Schrodinger fields");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*solve) {
      RunConfig cfg = load_config(config_path);
      apply_overrides(cfg, overrides);
      const RunRecord rec = cmd_solve(cfg, out_dir);
      print_run_table(std::cout, {rec});
      std::cout << "record: " << (fs::path(out_dir) / (cfg.name + ".csv")).string() << '\n';
      return rec.report.converged ? 0 : 1;
    }
    if (*bench) {
      const auto records =
          cmd_bench(suite, max_n, overrides,
                    bench_out ? std::optional<fs::path>(*bench_out) : std::nullopt);
      print_run_table(std::cout, records);
      const bool all = std::all_of(records.begin(), records.end(),
                                   [](const RunRecord& r) { return r.report.converged; });
      return all ? 0 : 1;
    }
    if (*qg) {
      profile.shift = shift_over_pi2 * std::numbers::pi * std::numbers::pi;
      const auto entries = cmd_qg_profile(profile);
      if (profile_out) {
        const fs::path dir(*profile_out);
        std::error_code ec;
        fs::create_directories(dir, ec);
        std::ofstream out(dir / "qg_profile.csv");
        if (!out) throw Error(ErrorKind::io, "cannot write " + (dir / "qg_profile.csv").string());
        write_profile_csv(out, entries);
        out.flush();
        if (!out) throw Error(ErrorKind::io, "write failed: " + (dir / "qg_profile.csv").string());
      } else {
        write_profile_csv(std::cout, entries);
      }
      return 0;
    }
    if (*fields) {
      RunConfig cfg = load_config(config_path);
      apply_overrides(cfg, overrides);
      std::cout << cmd_fields(cfg, fields_out).string() << '\n';
      return 0;
    }
  } catch (const Error& e) {
    std::cerr << "error[" << to_string(e.kind()) << "]: " << e.what() << '\n';
    return exit_code(e.kind());
  } catch (const std::bad_alloc&) {
    std::cerr << "error[io]: out of memory\n";
    return 4;
  }
  return 2;
}

}  // namespace perisolve::app
