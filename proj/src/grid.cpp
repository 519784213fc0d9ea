#include "perisolve/grid.hpp"

#include <bit>
#include <string>

#include "perisolve/error.hpp"

namespace perisolve {

GridSpec::GridSpec(int d, int n) : d_(d), n_(n), size_(1) {
  for (int k = 0; k < d; ++k) size_ *= n;
}

GridSpec make_grid(int d, int n) {
  if (d < 1 || d > 3)
    throw Error(ErrorKind::invalid_argument,
                "grid dimension must be 1, 2 or 3, got " + std::to_string(d));
  if (n % 2 != 0)
    throw Error(ErrorKind::invalid_argument,
                "points per dimension must be even, got " + std::to_string(n));
  const int min_n = d == 1 ? 2 : 4;
  if (n < min_n)
    throw Error(ErrorKind::invalid_argument,
                "points per dimension must be at least " + std::to_string(min_n));
  if (!std::has_single_bit(static_cast<unsigned>(n)))
    throw Error(ErrorKind::invalid_argument,
                "points per dimension must be a power of two, got " + std::to_string(n));
  return GridSpec(d, n);
}

Coord GridSpec::coords(std::int64_t index) const noexcept {
  Coord c{0, 0, 0};
  for (int k = d_ - 1; k >= 0; --k) {
    c[k] = static_cast<int>(index % n_);
    index /= n_;
  }
  return c;
}

std::int64_t GridSpec::index(const Coord& c) const noexcept {
  std::int64_t idx = 0;
  for (int k = 0; k < d_; ++k) {
    int ck = c[k] % n_;
    if (ck < 0) ck += n_;
    idx = idx * n_ + ck;
  }
  return idx;
}

std::int64_t GridSpec::shifted(std::int64_t base, const Coord& offset) const noexcept {
  Coord c = coords(base);
  for (int k = 0; k < d_; ++k) c[k] += offset[k];
  return index(c);
}

void GridSpec::require_conforming(std::span<const double> field, const char* what) const {
  if (static_cast<std::int64_t>(field.size()) != size_)
    throw Error(ErrorKind::shape_mismatch,
                std::string(what) + ": expected " + std::to_string(size_) +
                    " values, got " + std::to_string(field.size()));
}

std::vector<Coord> cube_offsets(int d, int t) {
  std::vector<Coord> out;
  const int side = 2 * t + 1;
  int count = 1;
  for (int k = 0; k < d; ++k) count *= side;
  out.reserve(count);
  for (int idx = 0; idx < count; ++idx) {
    Coord c{0, 0, 0};
    int rem = idx;
    for (int k = d - 1; k >= 0; --k) {
      c[k] = rem % side - t;
      rem /= side;
    }
    out.push_back(c);
  }
  return out;
}

}  // namespace perisolve
