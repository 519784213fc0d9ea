#include "fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <mutex>

namespace perisolve {

namespace {
// FFTW's planner is not reentrant; execution of an existing plan is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

RealFft::RealFft(const GridSpec& grid) {
  const int d = grid.dim();
  const int n = grid.n();
  int dims[3] = {n, n, n};
  real_size_ = static_cast<std::size_t>(grid.size());
  spectrum_size_ = real_size_ / n * (n / 2 + 1);

  std::lock_guard lock(planner_mutex());
  real_buf_ = fftw_alloc_real(real_size_);
  spec_buf_ = reinterpret_cast<std::complex<double>*>(fftw_alloc_complex(spectrum_size_));
  auto* spec = reinterpret_cast<fftw_complex*>(spec_buf_);
  forward_plan_ = fftw_plan_dft_r2c(d, dims, real_buf_, spec, FFTW_ESTIMATE);
  inverse_plan_ = fftw_plan_dft_c2r(d, dims, spec, real_buf_, FFTW_ESTIMATE);
}

RealFft::~RealFft() {
  std::lock_guard lock(planner_mutex());
  fftw_destroy_plan(forward_plan_);
  fftw_destroy_plan(inverse_plan_);
  fftw_free(real_buf_);
  fftw_free(spec_buf_);
}

void RealFft::forward(std::span<const double> in, std::span<std::complex<double>> out) {
  std::copy(in.begin(), in.end(), real_buf_);
  fftw_execute(forward_plan_);
  std::copy(spec_buf_, spec_buf_ + spectrum_size_, out.begin());
}

void RealFft::inverse(std::span<const std::complex<double>> in, std::span<double> out) {
  // c2r overwrites its input array, hence the staging copy.
  std::copy(in.begin(), in.end(), spec_buf_);
  fftw_execute(inverse_plan_);
  std::copy(real_buf_, real_buf_ + real_size_, out.begin());
}

}  // namespace perisolve
