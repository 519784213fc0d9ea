#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <span>
#include <vector>

#include "perisolve/grid.hpp"
#include "perisolve/sparse.hpp"

namespace perisolve {

/// Shifts of the form (4m + 2) pi^2, sorted ascending and distinct. These
/// sit halfway between consecutive eigenvalues 4 pi^2 |k|^2 of L, so L + s
/// is never singular.
struct ShiftList {
  std::vector<int> lattice;     // m for each shift
  std::vector<double> shifts;   // (4m + 2) pi^2
  double v_min = 0.0;
  double v_max = 0.0;

  std::size_t size() const noexcept { return shifts.size(); }
};

double lattice_shift(int m) noexcept;
/// Lattice index of the (4m + 2) pi^2 value nearest to `value`.
int nearest_lattice_index(double value) noexcept;

/// `count` evenly spaced targets over [min v, max v] (the midpoint when
/// count == 1), snapped to the lattice, deduplicated and sorted.
ShiftList build_shift_list(std::span<const double> v, int count);

/// Optimal local stencil for one (shift, radius) pair.
struct Stencil {
  double shift = 0.0;
  int t = 1;
  std::vector<Coord> offsets;     // cube {-t..t}^d, dimension 0 slowest
  std::vector<double> alpha;      // unit vector, entry of largest magnitude positive
  Eigen::MatrixXd green_block;    // G_s restricted to offsets x offsets
  std::vector<double> c_row;      // alpha^T green_block
  double sigma_min = 0.0;         // || alpha^T G_s[mu, mu^c] ||_2
  double min_eigenvalue = 0.0;    // smallest eigenvalue of the far-field Gram matrix

  std::size_t size() const noexcept { return alpha.size(); }
};

/// G_s[mu, mu^c] G_s[mu, mu^c]^T for the cube of radius t around the origin,
/// formed as A1 - A2 from the kernel g and its self-convolution a. A1 is read
/// off a; A2 = G_s[mu, mu] G_s[mu, mu]^T.
Eigen::MatrixXd far_field_gram(const GridSpec& grid, std::span<const double> g,
                               std::span<const double> a, int t);

Stencil compute_stencil(const GridSpec& grid, double shift, int t);

/// Stencil from a precomputed kernel and autocorrelation; compute_stencil()
/// and build_stencil_table() both go through here.
Stencil stencil_from_kernels(const GridSpec& grid, double shift, int t,
                             std::span<const double> g, std::span<const double> a);

class StencilTable {
 public:
  StencilTable(GridSpec grid, ShiftList shifts, int t_max, std::vector<Stencil> stencils,
               int autocorrelations);

  const GridSpec& grid() const noexcept { return grid_; }
  const ShiftList& shifts() const noexcept { return shifts_; }
  int t_max() const noexcept { return t_max_; }
  std::size_t size() const noexcept { return stencils_.size(); }
  /// Number of kernel self-convolutions performed while building (one per shift).
  int autocorrelations() const noexcept { return autocorrelations_; }

  /// Throws ErrorKind::invalid_argument for a pair outside the table.
  const Stencil& at(std::size_t shift_index, int t) const;

 private:
  GridSpec grid_;
  ShiftList shifts_;
  int t_max_;
  std::vector<Stencil> stencils_;
  int autocorrelations_;
};

/// Stencils for every shift and every t in 1..t_max. Kernel and
/// autocorrelation are computed once per shift. `threads` <= 0 reads
/// PERISOLVE_THREADS (default 1).
StencilTable build_stencil_table(const GridSpec& grid, const ShiftList& shifts, int t_max,
                                 int threads = 0);

/// Per-point index into `shifts` of the closest shift; ties go to the smaller.
std::vector<int> assign_shifts(std::span<const double> v, const ShiftList& shifts);

/// The sparse surrogate P = Q + C diag(v - s_j) and the truncation C of QG.
struct SparseSystem {
  GridSpec grid;
  CsrMatrix C;
  CsrMatrix P;
  std::vector<int> shift_index;
  std::vector<int> t_map;
};

SparseSystem assemble_sparse_system(const GridSpec& grid, std::span<const double> v,
                                    const StencilTable& table, std::span<const int> t_map,
                                    std::span<const int> shift_index);

/// Row j of Q (alpha scattered onto the neighbourhood), as a sparse row.
CsrMatrix q_rows(const SparseSystem& sys, const StencilTable& table);

struct ProfileEntry {
  std::int64_t column = 0;
  double magnitude = 0.0;
  bool reserved = false;
};

/// |row j of Q G_s| for the radius-t stencil of shift s, with the entries in
/// the neighbourhood of j flagged as reserved.
std::vector<ProfileEntry> qg_row_profile(const GridSpec& grid, double shift, int t,
                                         std::int64_t j);

}  // namespace perisolve
