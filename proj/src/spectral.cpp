#include "perisolve/spectral.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "fft.hpp"
#include "perisolve/error.hpp"

namespace perisolve {

namespace {
constexpr double kFourPiSq = 4.0 * std::numbers::pi * std::numbers::pi;
}

SpectralOperator::SpectralOperator(const GridSpec& grid, RealField potential)
    : grid_(grid), potential_(std::move(potential)), fft_(std::make_unique<RealFft>(grid)) {
  grid_.require_conforming(potential_, "potential");
  symbol_.resize(fft_->spectrum_size());
  RealFft::for_each_frequency(grid_, [&](std::size_t i, double k2) {
    symbol_[i] = kFourPiSq * k2;
  });
}

SpectralOperator::~SpectralOperator() = default;
SpectralOperator::SpectralOperator(SpectralOperator&&) noexcept = default;
SpectralOperator& SpectralOperator::operator=(SpectralOperator&&) noexcept = default;

void SpectralOperator::apply(std::span<const double> u, std::span<double> out) const {
  grid_.require_conforming(u, "operator input");
  grid_.require_conforming(out, "operator output");
  std::vector<std::complex<double>> spec(fft_->spectrum_size());
  fft_->forward(u, spec);
  const double scale = 1.0 / static_cast<double>(grid_.size());
  for (std::size_t i = 0; i < spec.size(); ++i) spec[i] *= symbol_[i] * scale;
  fft_->inverse(spec, out);
  for (std::size_t j = 0; j < out.size(); ++j) out[j] += potential_[j] * u[j];
}

RealField SpectralOperator::apply(std::span<const double> u) const {
  RealField out(u.size());
  apply(u, out);
  return out;
}

RealField apply_operator(const GridSpec& grid, std::span<const double> v,
                         std::span<const double> u) {
  grid.require_conforming(v, "potential");
  SpectralOperator op(grid, RealField(v.begin(), v.end()));
  return op.apply(u);
}

double resonance_distance(const GridSpec& grid, double shift) {
  double best = std::numeric_limits<double>::infinity();
  RealFft::for_each_frequency(grid, [&](std::size_t, double k2) {
    best = std::min(best, std::abs(kFourPiSq * k2 + shift));
  });
  return best;
}

RealField greens_kernel(const GridSpec& grid, double shift) {
  const double guard = 1e-10 * std::max(std::abs(shift), 1.0);
  if (resonance_distance(grid, shift) < guard)
    throw Error(ErrorKind::resonance,
                "shift " + std::to_string(shift) + " hits an eigenvalue of the Laplacian");

  RealFft fft(grid);
  std::vector<std::complex<double>> spec(fft.spectrum_size());
  const double scale = 1.0 / static_cast<double>(grid.size());
  RealFft::for_each_frequency(grid, [&](std::size_t i, double k2) {
    spec[i] = scale / (kFourPiSq * k2 + shift);
  });
  RealField g(static_cast<std::size_t>(grid.size()));
  fft.inverse(spec, g);
  return g;
}

RealField kernel_autocorrelation(const GridSpec& grid, std::span<const double> g) {
  grid.require_conforming(g, "kernel");
  RealFft fft(grid);
  std::vector<std::complex<double>> spec(fft.spectrum_size());
  fft.forward(g, spec);
  const double scale = 1.0 / static_cast<double>(grid.size());
  for (auto& z : spec) z = z * z * scale;
  RealField a(g.size());
  fft.inverse(spec, a);
  return a;
}

}  // namespace perisolve
