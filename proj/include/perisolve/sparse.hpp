#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace perisolve {

/// Compressed sparse row matrix, square, with sorted column indices per row.
struct CsrMatrix {
  std::int64_t rows = 0;
  std::vector<std::int64_t> row_ptr{0};
  std::vector<std::int32_t> cols;
  std::vector<double> values;

  std::int64_t nnz() const noexcept { return static_cast<std::int64_t>(values.size()); }
  std::int64_t row_nnz(std::int64_t r) const noexcept { return row_ptr[r + 1] - row_ptr[r]; }

  /// y = M x
  void multiply(std::span<const double> x, std::span<double> y) const;

  /// Entry (r, c) or 0 if structurally absent.
  double at(std::int64_t r, std::int64_t c) const noexcept;

  bool operator==(const CsrMatrix&) const = default;
};

}  // namespace perisolve
