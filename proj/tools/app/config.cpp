#include "app/config.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "perisolve/error.hpp"

namespace perisolve::app {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

struct Entry {
  std::string value;
  int line;
};

[[noreturn]] void fail(std::string_view source, int line, std::string_view key,
                       const std::string& msg) {
  std::ostringstream os;
  os << source;
  if (line > 0) os << ":" << line;
  os << ": key '" << key << "': " << msg;
  throw Error(ErrorKind::config, os.str());
}

template <class T>
T parse_number(std::string_view source, std::string_view key, const Entry& e) {
  T value{};
  const char* first = e.value.data();
  const char* last = first + e.value.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) fail(source, e.line, key, "cannot parse '" + e.value + "'");
  return value;
}

bool parse_bool(std::string_view source, std::string_view key, const Entry& e) {
  if (e.value == "true" || e.value == "1" || e.value == "yes") return true;
  if (e.value == "false" || e.value == "0" || e.value == "no") return false;
  fail(source, e.line, key, "expected true or false, got '" + e.value + "'");
}

const std::set<std::string, std::less<>> kKnownKeys = {
    "name", "equation", "d", "n", "field", "omega", "energy", "seed", "shifts",
    "t_max", "leaf", "tol", "restart", "maxit", "snapshots"};

}  // namespace

RunConfig parse_config(std::string_view text, std::string_view source) {
  std::map<std::string, Entry, std::less<>> entries;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto eol = text.find('\n', pos);
    std::string_view line = text.substr(pos, eol == std::string_view::npos ? text.size() - pos : eol - pos);
    pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) fail(source, line_no, line, "expected 'key = value'");
    const std::string key(trim(line.substr(0, eq)));
    const std::string value(trim(line.substr(eq + 1)));
    if (!kKnownKeys.contains(key)) fail(source, line_no, key, "unknown key");
    if (value.empty()) fail(source, line_no, key, "empty value");
    if (entries.contains(key)) fail(source, line_no, key, "duplicate key");
    entries.emplace(key, Entry{value, line_no});
  }

  for (const char* required : {"equation", "d", "n", "field"})
    if (!entries.contains(required)) fail(source, 0, required, "missing required key");

  RunConfig cfg;
  ProblemConfig& p = cfg.experiment.problem;
  auto get = [&](std::string_view key) -> const Entry* {
    const auto it = entries.find(key);
    return it == entries.end() ? nullptr : &it->second;
  };
  auto guarded = [&](std::string_view key, auto&& action) {
    const Entry* e = get(key);
    if (!e) return;
    try {
      action(*e);
    } catch (const Error& err) {
      if (err.kind() == ErrorKind::config && std::string_view(err.what()).starts_with(source)) throw;
      fail(source, e->line, key, err.what());
    }
  };

  guarded("name", [&](const Entry& e) { cfg.name = e.value; });
  guarded("equation", [&](const Entry& e) { p.equation = parse_equation(e.value); });
  guarded("field", [&](const Entry& e) { p.field = parse_field_kind(e.value); });
  guarded("d", [&](const Entry& e) { p.d = parse_number<int>(source, "d", e); });
  guarded("n", [&](const Entry& e) { p.n = parse_number<int>(source, "n", e); });
  guarded("omega", [&](const Entry& e) { p.omega = parse_number<double>(source, "omega", e); });
  guarded("energy", [&](const Entry& e) { p.energy = parse_number<double>(source, "energy", e); });
  guarded("seed", [&](const Entry& e) { p.seed = parse_number<std::uint64_t>(source, "seed", e); });
  guarded("shifts", [&](const Entry& e) {
    cfg.experiment.shift_count = parse_number<int>(source, "shifts", e);
  });
  guarded("t_max", [&](const Entry& e) { cfg.experiment.t_max = parse_number<int>(source, "t_max", e); });
  guarded("leaf", [&](const Entry& e) { cfg.experiment.leaf = parse_number<int>(source, "leaf", e); });
  guarded("tol", [&](const Entry& e) { cfg.experiment.gmres.tol = parse_number<double>(source, "tol", e); });
  guarded("restart", [&](const Entry& e) {
    cfg.experiment.gmres.restart = parse_number<int>(source, "restart", e);
  });
  guarded("maxit", [&](const Entry& e) {
    cfg.experiment.gmres.max_iterations = parse_number<int>(source, "maxit", e);
  });
  guarded("snapshots", [&](const Entry& e) { cfg.snapshots = parse_bool(source, "snapshots", e); });

  const bool helmholtz_field = p.field == FieldKind::gaussian_bump || p.field == FieldKind::cross;
  if (helmholtz_field != (p.equation == Equation::helmholtz))
    fail(source, get("field")->line, "field",
         std::string(to_string(p.field)) + " is not a field of the " +
             std::string(to_string(p.equation)) + " equation");
  if (p.d < 1 || p.d > 3) fail(source, get("d")->line, "d", "must be 1, 2 or 3");
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::io, "cannot open config file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path.string());
}

std::string format_config(const RunConfig& cfg, std::string_view separator) {
  const ProblemConfig& p = cfg.experiment.problem;
  std::ostringstream os;
  os.precision(17);
  os << "name = " << cfg.name << separator << "equation = " << to_string(p.equation) << separator
     << "d = " << p.d << separator << "n = " << p.n << separator << "field = " << to_string(p.field)
     << separator;
  if (p.omega > 0.0) os << "omega = " << p.omega << separator;
  os << "energy = " << p.energy << separator << "seed = " << p.seed << separator
     << "shifts = "
     << (cfg.experiment.shift_count > 0 ? cfg.experiment.shift_count
                                         : preset_shift_count(p.d, p.n))
     << separator << "t_max = " << cfg.experiment.t_max << separator
     << "leaf = " << cfg.experiment.leaf << separator << "tol = " << cfg.experiment.gmres.tol
     << separator << "restart = " << cfg.experiment.gmres.restart << separator
     << "maxit = " << cfg.experiment.gmres.max_iterations << separator
     << "snapshots = " << (cfg.snapshots ? "true" : "false");
  return os.str();
}

}  // namespace perisolve::app
