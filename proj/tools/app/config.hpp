#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "perisolve/experiment.hpp"

namespace perisolve::app {

/// One run as described by a config file: the experiment plus bookkeeping.
struct RunConfig {
  std::string name = "run";
  ExperimentConfig experiment;
  bool snapshots = true;
};

/// Parses flat `key = value` text with `#` comments. Required keys:
/// equation, d, n, field. Unknown or malformed keys throw ErrorKind::config
/// naming the line and key.
RunConfig parse_config(std::string_view text, std::string_view source = "<config>");
RunConfig load_config(const std::filesystem::path& path);

/// Inverse of parse_config: every key written explicitly, so a record is
/// re-runnable from its echo.
std::string format_config(const RunConfig& cfg, std::string_view separator = "\n");

}  // namespace perisolve::app
