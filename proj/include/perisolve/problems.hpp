#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "perisolve/grid.hpp"

namespace perisolve {

enum class Equation { helmholtz, schrodinger };
enum class FieldKind { gaussian_bump, cross, random_gaussians, lattice_vacancy };

std::string_view to_string(Equation e) noexcept;
std::string_view to_string(FieldKind f) noexcept;
Equation parse_equation(std::string_view s);
FieldKind parse_field_kind(std::string_view s);

/// Parameters of the test media. Defaults reproduce the benchmark presets.
struct FieldParams {
  // Helmholtz velocity c(x) = background + contrast * profile(x).
  double background_speed = 1.0;
  double bump_contrast = 0.25;
  double bump_width = 0.1;          // Gaussian standard deviation, domain units
  double cross_speed = 1.25;
  double cross_half_width = 0.125;  // arm half width, domain units
  // Schrodinger external potential, grid units.
  double atom_amplitude = 1.0;
  double atom_width = 2.0;
  int lattice_spacing = 8;
};

struct ProblemConfig {
  Equation equation = Equation::helmholtz;
  int d = 2;
  int n = 64;
  FieldKind field = FieldKind::gaussian_bump;
  double omega = 0.0;    // Helmholtz only; <= 0 selects 2 pi n / 4
  double energy = 2.4;   // Schrodinger only
  std::uint64_t seed = 20160815;
  FieldParams params;

  double angular_frequency() const noexcept;
};

/// v = -(omega / c(x))^2 sampled at x = h j.
RealField helmholtz_field(const ProblemConfig& cfg);

/// v = n^2 (v_ext(j) - E) with v_ext a sum of Gaussians on the integer grid.
/// Random centers keep a minimum separation of two Gaussian widths.
/// Throws ErrorKind::invalid_argument if max v_ext >= E.
RealField schrodinger_field(const ProblemConfig& cfg);

/// Dispatches on cfg.equation.
RealField make_potential(const ProblemConfig& cfg);

/// Centred Gaussian source of width 2h, unit maximum.
RealField gaussian_rhs(const GridSpec& grid);

}  // namespace perisolve
