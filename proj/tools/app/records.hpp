#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "app/config.hpp"
#include "perisolve/experiment.hpp"

namespace perisolve::app {

inline constexpr const char* kRunSchema = "perisolve.run.v1";
inline constexpr const char* kProfileSchema = "perisolve.qg_profile.v1";

struct RunRecord {
  RunConfig config;
  std::string suite;  // empty for single solves
  int shift_count = 0;
  std::int64_t unknowns = 0;
  SolveReport report;
  FactorizationStats factor_stats;
  std::filesystem::path solution_path;
  std::filesystem::path potential_path;
};

RunRecord make_record(const RunConfig& cfg, const ExperimentResult& result);

void write_run_header(std::ostream& os);
void write_run_row(std::ostream& os, const RunRecord& rec);
void write_runs_csv(const std::filesystem::path& path, const std::vector<RunRecord>& records);

/// Human-readable table in the column order of the published result tables.
void print_run_table(std::ostream& os, const std::vector<RunRecord>& records);

void write_profile_csv(std::ostream& os, const std::vector<ProfileEntry>& profile);

/// Header line "d n count\n" followed by count little-endian float64 values,
/// dimension 0 slowest.
void write_snapshot(const std::filesystem::path& path, const GridSpec& grid,
                    std::span<const double> values);

struct Snapshot {
  int d = 0;
  int n = 0;
  std::vector<double> values;
};
Snapshot read_snapshot(const std::filesystem::path& path);

}  // namespace perisolve::app
