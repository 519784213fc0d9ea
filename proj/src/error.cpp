#include "perisolve/error.hpp"

namespace perisolve {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::invalid_argument: return "invalid_argument";
    case ErrorKind::shape_mismatch: return "shape_mismatch";
    case ErrorKind::resonance: return "resonance";
    case ErrorKind::singular: return "singular";
    case ErrorKind::breakdown: return "breakdown";
    case ErrorKind::config: return "config";
    case ErrorKind::io: return "io";
  }
  return "unknown";
}

}  // namespace perisolve
