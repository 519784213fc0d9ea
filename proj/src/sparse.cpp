#include "perisolve/sparse.hpp"

#include <algorithm>

#include "perisolve/error.hpp"

namespace perisolve {

void CsrMatrix::multiply(std::span<const double> x, std::span<double> y) const {
  if (static_cast<std::int64_t>(x.size()) != rows || static_cast<std::int64_t>(y.size()) != rows)
    throw Error(ErrorKind::shape_mismatch, "sparse matvec: vector length differs from matrix size");
  for (std::int64_t r = 0; r < rows; ++r) {
    double acc = 0.0;
    for (std::int64_t p = row_ptr[r]; p < row_ptr[r + 1]; ++p) acc += values[p] * x[cols[p]];
    y[r] = acc;
  }
}

double CsrMatrix::at(std::int64_t r, std::int64_t c) const noexcept {
  const auto first = cols.begin() + row_ptr[r];
  const auto last = cols.begin() + row_ptr[r + 1];
  const auto it = std::lower_bound(first, last, static_cast<std::int32_t>(c));
  if (it == last || *it != c) return 0.0;
  return values[it - cols.begin()];
}

}  // namespace perisolve
