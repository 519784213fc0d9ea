#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace perisolve {

enum class ErrorKind {
  invalid_argument,
  shape_mismatch,
  resonance,
  singular,
  breakdown,
  config,
  io,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Library-wide exception. `kind()` is stable and machine-readable; the CLI
/// maps it to an exit code and an error category on stderr.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace perisolve
