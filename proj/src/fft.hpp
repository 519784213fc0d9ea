#pragma once

#include <complex>
#include <cstddef>
#include <span>

#include "perisolve/grid.hpp"

typedef struct fftw_plan_s* fftw_plan;

namespace perisolve {

/// Real-to-complex FFT over the full d-dimensional grid. The spectrum is the
/// FFTW half-complex layout: dims n x ... x (n/2 + 1), row-major. Transforms
/// are unnormalized in both directions.
class RealFft {
 public:
  explicit RealFft(const GridSpec& grid);
  ~RealFft();
  RealFft(const RealFft&) = delete;
  RealFft& operator=(const RealFft&) = delete;

  std::size_t spectrum_size() const noexcept { return spectrum_size_; }

  void forward(std::span<const double> in, std::span<std::complex<double>> out);
  /// Destroys nothing in `in`; the input is copied to internal storage.
  void inverse(std::span<const std::complex<double>> in, std::span<double> out);

  /// Calls f(spectrum_index, |k|^2) for every half-spectrum entry.
  template <class F>
  static void for_each_frequency(const GridSpec& grid, F&& f);

 private:
  std::size_t real_size_;
  std::size_t spectrum_size_;
  double* real_buf_ = nullptr;
  std::complex<double>* spec_buf_ = nullptr;
  fftw_plan forward_plan_ = nullptr;
  fftw_plan inverse_plan_ = nullptr;
};

template <class F>
void RealFft::for_each_frequency(const GridSpec& grid, F&& f) {
  const int d = grid.dim();
  const int n = grid.n();
  const int last = n / 2 + 1;
  std::size_t idx = 0;
  if (d == 1) {
    for (int k = 0; k < last; ++k) f(idx++, static_cast<double>(k) * k);
  } else if (d == 2) {
    for (int a = 0; a < n; ++a) {
      const double ka = grid.wavenumber(a);
      for (int k = 0; k < last; ++k) f(idx++, ka * ka + static_cast<double>(k) * k);
    }
  } else {
    for (int a = 0; a < n; ++a) {
      const double ka = grid.wavenumber(a);
      for (int b = 0; b < n; ++b) {
        const double kb = grid.wavenumber(b);
        for (int k = 0; k < last; ++k)
          f(idx++, ka * ka + kb * kb + static_cast<double>(k) * k);
      }
    }
  }
}

}  // namespace perisolve
