#pragma once

#include <complex>
#include <memory>
#include <span>
#include <vector>

#include "perisolve/grid.hpp"

namespace perisolve {

class RealFft;

/// Pseudospectral operator A = L + diag(v) with L = F^-1 diag(4 pi^2 |k|^2) F.
///
/// Owns its FFT workspace, so one instance must not be applied from two
/// threads at once. Construct one per thread if needed.
class SpectralOperator {
 public:
  SpectralOperator(const GridSpec& grid, RealField potential);
  ~SpectralOperator();
  SpectralOperator(SpectralOperator&&) noexcept;
  SpectralOperator& operator=(SpectralOperator&&) noexcept;

  const GridSpec& grid() const noexcept { return grid_; }
  const RealField& potential() const noexcept { return potential_; }

  /// out = L u + v .* u
  void apply(std::span<const double> u, std::span<double> out) const;
  RealField apply(std::span<const double> u) const;

 private:
  GridSpec grid_;
  RealField potential_;
  std::vector<double> symbol_;  // 4 pi^2 |k|^2 over the half spectrum
  std::unique_ptr<RealFft> fft_;
};

/// (L + diag(v)) u, with a throwaway FFT workspace.
RealField apply_operator(const GridSpec& grid, std::span<const double> v,
                         std::span<const double> u);

/// Kernel g of G_s = (L + s)^-1, so that G_s[j1, j2] = g[j1 - j2 mod n].
/// Throws ErrorKind::resonance if some |4 pi^2 |k|^2 + s| < 1e-10 max(|s|, 1).
RealField greens_kernel(const GridSpec& grid, double shift);

/// Periodic self-convolution a = g * g, i.e. a[j1 - j2] = G[j1,:] . G[j2,:]
/// for a translation-invariant G with kernel g.
RealField kernel_autocorrelation(const GridSpec& grid, std::span<const double> g);

/// min over k in K of |4 pi^2 |k|^2 + s|.
double resonance_distance(const GridSpec& grid, double shift);

}  // namespace perisolve
