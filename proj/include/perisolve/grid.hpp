#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

namespace perisolve {

/// Values on the spatial grid, row-major over {0..n-1}^d with dimension 0
/// slowest.
using RealField = std::vector<double>;

using Coord = std::array<int, 3>;

/// Uniform periodic grid on [0,1)^d with n points per dimension.
///
/// The spatial index set is {0..n-1}^d; the frequency set is
/// {-n/2..n/2-1}^d. Only construct through make_grid().
class GridSpec {
 public:
  int dim() const noexcept { return d_; }
  int n() const noexcept { return n_; }
  double h() const noexcept { return 1.0 / n_; }
  std::int64_t size() const noexcept { return size_; }

  Coord coords(std::int64_t index) const noexcept;
  /// Flat index of `c` after wrapping each component modulo n.
  std::int64_t index(const Coord& c) const noexcept;
  /// Flat index of `base + offset`, periodically wrapped.
  std::int64_t shifted(std::int64_t base, const Coord& offset) const noexcept;

  /// Maps an FFT-natural frequency index (0..n-1) to its representative in
  /// {-n/2..n/2-1}.
  int wavenumber(int fft_index) const noexcept {
    return fft_index < n_ / 2 ? fft_index : fft_index - n_;
  }

  void require_conforming(std::span<const double> field, const char* what) const;

  bool operator==(const GridSpec&) const = default;

 private:
  friend GridSpec make_grid(int d, int n);
  GridSpec(int d, int n);

  int d_ = 1;
  int n_ = 4;
  std::int64_t size_ = 4;
};

/// Validates and builds a grid. n must be a power of two, at least 4 (at
/// least 2 in 1D, which only tests use); d in {1,2,3}.
GridSpec make_grid(int d, int n);

/// Offsets of the cube {-t..t}^d in lexicographic order, dimension 0 slowest.
std::vector<Coord> cube_offsets(int d, int t);

/// Minimal periodic displacement from a to b on a ring of n points, in
/// [-n/2, n/2).
inline int periodic_delta(int a, int b, int n) noexcept {
  int delta = ((b - a) % n + n) % n;
  return delta >= n / 2 ? delta - n : delta;
}

}  // namespace perisolve
