#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "app/config.hpp"
#include "app/records.hpp"
#include "perisolve/error.hpp"

namespace perisolve::app {

/// Command-line values that take precedence over the config file.
struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<double> tol;
  std::optional<int> restart;
  std::optional<int> t_max;
  std::optional<int> leaf;
};

void apply_overrides(RunConfig& cfg, const Overrides& o);

/// Solves one configured problem and writes <out>/<name>.csv plus, when
/// cfg.snapshots is set, <name>_u.bin and <name>_v.bin.
RunRecord cmd_solve(const RunConfig& cfg, const std::filesystem::path& out_dir);

inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {"2DHi", "2DHii", "3DHi", "3DHii",
                                                 "2DSi", "2DSii", "3DSi", "3DSii"};
  return names;
}

/// Experiment of `suite` at edge length n with the benchmark presets.
RunConfig suite_config(std::string_view suite, int n);

/// Sizes of the suite ladder not exceeding max_n (0 selects the default cap).
std::vector<int> suite_ladder(std::string_view suite, int max_n = 0);

/// Runs every rung sequentially. Writes <out>/<suite>.csv when out_dir is set.
std::vector<RunRecord> cmd_bench(std::string_view suite, int max_n, const Overrides& overrides,
                                 const std::optional<std::filesystem::path>& out_dir);

struct ProfileRequest {
  int d = 1;
  int n = 32;
  double shift = -62.0 * 9.869604401089358;
  int t = 1;
  std::int64_t j = 16;
};

std::vector<ProfileEntry> cmd_qg_profile(const ProfileRequest& req);

/// Writes the potential snapshot <out>/<name>_v.bin and returns its path.
std::filesystem::path cmd_fields(const RunConfig& cfg, const std::filesystem::path& out_dir);

/// Entry point of the perisolve executable. Returns the process exit code:
/// 0 converged, 1 not converged, 2 configuration, 3 numerical, 4 I/O.
int run_cli(int argc, const char* const* argv);

int exit_code(ErrorKind kind) noexcept;

}  // namespace perisolve::app
