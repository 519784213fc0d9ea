#include "app/records.hpp"

#include <bit>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <sstream>

#include "perisolve/error.hpp"

namespace perisolve::app {

namespace {

std::string seconds(double t) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2e", t);
  return buf;
}

std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", x);
  return buf;
}

std::string quoted(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

std::uint64_t to_little_endian(std::uint64_t bits) {
  if constexpr (std::endian::native == std::endian::big) {
    std::uint64_t r = 0;
    for (int i = 0; i < 8; ++i) r = (r << 8) | ((bits >> (8 * i)) & 0xffu);
    return r;
  }
  return bits;
}

}  // namespace

RunRecord make_record(const RunConfig& cfg, const ExperimentResult& result) {
  RunRecord rec;
  rec.config = cfg;
  rec.config.experiment.shift_count = static_cast<int>(result.shifts.size());
  rec.shift_count = static_cast<int>(result.shifts.size());
  rec.unknowns = result.grid.size();
  rec.report = result.report;
  rec.factor_stats = result.factor_stats;
  return rec;
}

void write_run_header(std::ostream& os) {
  os << "schema,suite,name,equation,field,d,n,N,omega_over_2pi,energy,shifts,t_max,B,"
        "T_stencil,T_NDsetup,N_iter,T_NDsolve,T_total,restarts,converged,true_residual,"
        "max_front,factor_entries,solution_path,potential_path,config\n";
}

void write_run_row(std::ostream& os, const RunRecord& rec) {
  const ExperimentConfig& e = rec.config.experiment;
  const ProblemConfig& p = e.problem;
  const bool helmholtz = p.equation == Equation::helmholtz;
  std::ostringstream omega;
  if (helmholtz) omega << p.angular_frequency() / (2.0 * std::numbers::pi);
  std::ostringstream energy;
  if (!helmholtz) energy << p.energy;
  const StageTimings& t = rec.report.timings;
  os << kRunSchema << ',' << rec.suite << ',' << rec.config.name << ',' << to_string(p.equation)
     << ',' << to_string(p.field) << ',' << p.d << ',' << p.n << ',' << rec.unknowns << ','
     << omega.str() << ',' << energy.str() << ',' << rec.shift_count << ',' << e.t_max << ','
     << e.leaf << ',' << seconds(t.stencil) << ',' << seconds(t.nd_setup) << ','
     << rec.report.iterations << ',' << seconds(t.nd_solve) << ',' << seconds(t.total_solve)
     << ',' << rec.report.restarts << ',' << (rec.report.converged ? 1 : 0) << ','
     << sci(rec.report.true_residual) << ',' << rec.factor_stats.max_front << ','
     << rec.factor_stats.factor_entries << ',' << rec.solution_path.generic_string() << ','
     << rec.potential_path.generic_string() << ',' << quoted(format_config(rec.config, "; "))
     << '\n';
}

void write_runs_csv(const std::filesystem::path& path, const std::vector<RunRecord>& records) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::io, "cannot write " + path.string());
  write_run_header(out);
  for (const auto& rec : records) write_run_row(out, rec);
  out.flush();
  if (!out) throw Error(ErrorKind::io, "write failed: " + path.string());
}

void print_run_table(std::ostream& os, const std::vector<RunRecord>& records) {
  os << std::left << std::setw(10) << "suite" << std::right << std::setw(10) << "w/2pi"
     << std::setw(8) << "E" << std::setw(10) << "N" << std::setw(5) << "|S|" << std::setw(11)
     << "T_stencil" << std::setw(11) << "T_NDsetup" << std::setw(7) << "N_iter" << std::setw(11)
     << "T_NDsolve" << '\n';
  for (const auto& rec : records) {
    const ProblemConfig& p = rec.config.experiment.problem;
    std::ostringstream size;
    size << p.n << '^' << p.d;
    std::ostringstream omega, energy;
    if (p.equation == Equation::helmholtz)
      omega << p.angular_frequency() / (2.0 * std::numbers::pi);
    else
      energy << p.energy;
    os << std::left << std::setw(10) << (rec.suite.empty() ? rec.config.name : rec.suite)
       << std::right << std::setw(10) << omega.str() << std::setw(8) << energy.str()
       << std::setw(10) << size.str() << std::setw(5) << rec.shift_count << std::setw(11)
       << seconds(rec.report.timings.stencil) << std::setw(11)
       << seconds(rec.report.timings.nd_setup) << std::setw(7) << rec.report.iterations
       << (rec.report.converged ? " " : "*") << std::setw(10)
       << seconds(rec.report.timings.nd_solve) << '\n';
  }
}

void write_profile_csv(std::ostream& os, const std::vector<ProfileEntry>& profile) {
  os << "# schema: " << kProfileSchema << '\n' << "column_index,magnitude,reserved_flag\n";
  os << std::setprecision(17);
  for (const auto& e : profile)
    os << e.column << ',' << e.magnitude << ',' << (e.reserved ? 1 : 0) << '\n';
}

void write_snapshot(const std::filesystem::path& path, const GridSpec& grid,
                    std::span<const double> values) {
  grid.require_conforming(values, "snapshot");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::io, "cannot write " + path.string());
  out << grid.dim() << ' ' << grid.n() << ' ' << values.size() << '\n';
  std::vector<std::uint64_t> raw(values.size());
  for (std::size_t i = 0; i < values.size(); ++i)
    raw[i] = to_little_endian(std::bit_cast<std::uint64_t>(values[i]));
  out.write(reinterpret_cast<const char*>(raw.data()),
            static_cast<std::streamsize>(raw.size() * sizeof(std::uint64_t)));
  out.flush();
  if (!out) throw Error(ErrorKind::io, "write failed: " + path.string());
}

Snapshot read_snapshot(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::io, "cannot open " + path.string());
  Snapshot snap;
  std::size_t count = 0;
  std::string header;
  std::getline(in, header);
  std::istringstream hs(header);
  if (!(hs >> snap.d >> snap.n >> count))
    throw Error(ErrorKind::io, "malformed snapshot header in " + path.string());
  std::vector<std::uint64_t> raw(count);
  in.read(reinterpret_cast<char*>(raw.data()),
          static_cast<std::streamsize>(count * sizeof(std::uint64_t)));
  if (static_cast<std::size_t>(in.gcount()) != count * sizeof(std::uint64_t))
    throw Error(ErrorKind::io, "truncated snapshot " + path.string());
  snap.values.resize(count);
  for (std::size_t i = 0; i < count; ++i)
    snap.values[i] = std::bit_cast<double>(to_little_endian(raw[i]));
  return snap;
}

}  // namespace perisolve::app
