#include "perisolve/problems.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "perisolve/error.hpp"

namespace perisolve {

std::string_view to_string(Equation e) noexcept {
  return e == Equation::helmholtz ? "helmholtz" : "schrodinger";
}

std::string_view to_string(FieldKind f) noexcept {
  switch (f) {
    case FieldKind::gaussian_bump: return "gaussian_bump";
    case FieldKind::cross: return "cross";
    case FieldKind::random_gaussians: return "random_gaussians";
    case FieldKind::lattice_vacancy: return "lattice_vacancy";
  }
  return "unknown";
}

Equation parse_equation(std::string_view s) {
  if (s == "helmholtz") return Equation::helmholtz;
  if (s == "schrodinger") return Equation::schrodinger;
  throw Error(ErrorKind::config, "unknown equation '" + std::string(s) + "'");
}

FieldKind parse_field_kind(std::string_view s) {
  for (FieldKind f : {FieldKind::gaussian_bump, FieldKind::cross, FieldKind::random_gaussians,
                      FieldKind::lattice_vacancy})
    if (s == to_string(f)) return f;
  throw Error(ErrorKind::config, "unknown field '" + std::string(s) + "'");
}

double ProblemConfig::angular_frequency() const noexcept {
  return omega > 0.0 ? omega : 2.0 * std::numbers::pi * n / 4.0;
}

namespace {

// Squared periodic distance on the unit torus.
double torus_dist2(const Coord& j, const std::array<double, 3>& center, int d, int n) {
  double r2 = 0.0;
  for (int k = 0; k < d; ++k) {
    double delta = std::abs(static_cast<double>(j[k]) / n - center[k]);
    delta = std::min(delta, 1.0 - delta);
    r2 += delta * delta;
  }
  return r2;
}

void require_equation(const ProblemConfig& cfg, Equation e) {
  if (cfg.equation != e)
    throw Error(ErrorKind::invalid_argument,
                "field generator called for a " + std::string(to_string(cfg.equation)) + " problem");
}

}  // namespace

RealField helmholtz_field(const ProblemConfig& cfg) {
  require_equation(cfg, Equation::helmholtz);
  const GridSpec grid = make_grid(cfg.d, cfg.n);
  const FieldParams& fp = cfg.params;
  const double omega = cfg.angular_frequency();
  const std::array<double, 3> center{0.5, 0.5, 0.5};
  RealField v(static_cast<std::size_t>(grid.size()));
  for (std::int64_t j = 0; j < grid.size(); ++j) {
    const Coord c = grid.coords(j);
    double speed = fp.background_speed;
    if (cfg.field == FieldKind::gaussian_bump) {
      const double r2 = torus_dist2(c, center, cfg.d, cfg.n);
      speed += fp.bump_contrast * std::exp(-r2 / (2.0 * fp.bump_width * fp.bump_width));
    } else if (cfg.field == FieldKind::cross) {
      // Arm along axis k: every other coordinate within the half width of 0.5.
      int near = 0;
      for (int k = 0; k < cfg.d; ++k)
        if (std::abs(static_cast<double>(c[k]) / cfg.n - 0.5) <= fp.cross_half_width) ++near;
      if (near >= cfg.d - 1) speed = fp.cross_speed;
    } else {
      throw Error(ErrorKind::invalid_argument,
                  "field '" + std::string(to_string(cfg.field)) + "' is not a velocity model");
    }
    const double ratio = omega / speed;
    v[j] = -ratio * ratio;
  }
  return v;
}

RealField schrodinger_field(const ProblemConfig& cfg) {
  require_equation(cfg, Equation::schrodinger);
  const GridSpec grid = make_grid(cfg.d, cfg.n);
  const FieldParams& fp = cfg.params;
  const int d = cfg.d;
  const int n = cfg.n;

  std::vector<Coord> centers;
  if (cfg.field == FieldKind::random_gaussians) {
    // Uniform draws with rejection of any center closer than two widths to
    // an accepted one, so that overlaps cannot push the peak past E.
    // mt19937_64 output is fixed by the standard and n is a power of two, so
    // the modulo draw is portable and unbiased.
    std::mt19937_64 rng(cfg.seed);
    std::int64_t count = 1;
    for (int k = 0; k < d; ++k) count *= std::max(1, n / 8);
    const double min_sep2 = 4.0 * fp.atom_width * fp.atom_width;
    std::int64_t attempts = 0;
    while (static_cast<std::int64_t>(centers.size()) < count) {
      if (++attempts > 1000 * count)
        throw Error(ErrorKind::invalid_argument, "cannot place the requested number of Gaussians");
      Coord c{0, 0, 0};
      for (int k = 0; k < d; ++k) c[k] = static_cast<int>(rng() % static_cast<std::uint64_t>(n));
      const bool clear = std::none_of(centers.begin(), centers.end(), [&](const Coord& o) {
        double r2 = 0.0;
        for (int k = 0; k < d; ++k) {
          const double delta = periodic_delta(o[k], c[k], n);
          r2 += delta * delta;
        }
        return r2 < min_sep2;
      });
      if (clear) centers.push_back(c);
    }
  } else if (cfg.field == FieldKind::lattice_vacancy) {
    const int a = fp.lattice_spacing;
    const int per_dim = n / a;
    std::int64_t count = 1;
    for (int k = 0; k < d; ++k) count *= per_dim;
    double best = 1e300;
    std::int64_t vacancy = -1;
    for (std::int64_t i = 0; i < count; ++i) {
      Coord c{0, 0, 0};
      std::int64_t rem = i;
      double r2 = 0.0;
      for (int k = d - 1; k >= 0; --k) {
        c[k] = static_cast<int>(rem % per_dim) * a + a / 2;
        rem /= per_dim;
        const double delta = c[k] - n / 2.0;
        r2 += delta * delta;
      }
      // First site at minimal distance from the centre is removed.
      if (r2 < best) {
        best = r2;
        vacancy = i;
      }
      centers.push_back(c);
    }
    centers.erase(centers.begin() + vacancy);
  } else {
    throw Error(ErrorKind::invalid_argument,
                "field '" + std::string(to_string(cfg.field)) + "' is not an external potential");
  }

  // Each Gaussian is summed over its nearest periodic image, truncated where it
  // drops below ~1e-17.
  const double width = fp.atom_width;
  const int reach = std::min(n / 2 - 1, static_cast<int>(std::ceil(width * 9.0)));
  RealField vext(static_cast<std::size_t>(grid.size()), 0.0);
  const auto offsets = cube_offsets(d, reach);
  std::vector<double> weight(offsets.size());
  for (std::size_t p = 0; p < offsets.size(); ++p) {
    double r2 = 0.0;
    for (int k = 0; k < d; ++k) r2 += static_cast<double>(offsets[p][k]) * offsets[p][k];
    weight[p] = fp.atom_amplitude * std::exp(-r2 / (2.0 * width * width));
  }
  for (const Coord& c : centers) {
    const std::int64_t base = grid.index(c);
    for (std::size_t p = 0; p < offsets.size(); ++p) vext[grid.shifted(base, offsets[p])] += weight[p];
  }

  const double peak = *std::max_element(vext.begin(), vext.end());
  if (peak >= cfg.energy)
    throw Error(ErrorKind::invalid_argument,
                "external potential peak " + std::to_string(peak) + " reaches the energy " +
                    std::to_string(cfg.energy));
  const double n2 = static_cast<double>(n) * n;
  RealField v(vext.size());
  for (std::size_t j = 0; j < v.size(); ++j) v[j] = n2 * (vext[j] - cfg.energy);
  return v;
}

RealField make_potential(const ProblemConfig& cfg) {
  return cfg.equation == Equation::helmholtz ? helmholtz_field(cfg) : schrodinger_field(cfg);
}

RealField gaussian_rhs(const GridSpec& grid) {
  const std::array<double, 3> center{0.5, 0.5, 0.5};
  const double width = 2.0 * grid.h();
  RealField f(static_cast<std::size_t>(grid.size()));
  for (std::int64_t j = 0; j < grid.size(); ++j) {
    const double r2 = torus_dist2(grid.coords(j), center, grid.dim(), grid.n());
    f[j] = std::exp(-r2 / (2.0 * width * width));
  }
  const double peak = *std::max_element(f.begin(), f.end());
  for (double& x : f) x /= peak;
  return f;
}

}  // namespace perisolve
