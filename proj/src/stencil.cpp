#include "perisolve/stencil.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <string>
#include <exception>
#include <mutex>
#include <thread>

#include "perisolve/error.hpp"
#include "perisolve/spectral.hpp"

namespace perisolve {

namespace {

constexpr double kPiSq = std::numbers::pi * std::numbers::pi;

int threads_from_env() {
  if (const char* env = std::getenv("PERISOLVE_THREADS")) {
    const int value = std::atoi(env);
    if (value > 0) return value;
  }
  return 1;
}

// Kernel value at the periodic offset p - q.
double kernel_at(const GridSpec& grid, std::span<const double> kernel, const Coord& p,
                 const Coord& q) {
  Coord diff{p[0] - q[0], p[1] - q[1], p[2] - q[2]};
  return kernel[grid.index(diff)];
}

void check_radius(const GridSpec& grid, int t) {
  if (t < 1 || 2 * t + 1 >= grid.n())
    throw Error(ErrorKind::invalid_argument,
                "stencil radius " + std::to_string(t) + " does not fit a grid with n = " +
                    std::to_string(grid.n()));
}

}  // namespace

double lattice_shift(int m) noexcept { return (4.0 * m + 2.0) * kPiSq; }

int nearest_lattice_index(double value) noexcept {
  const int lo = static_cast<int>(std::floor((value / kPiSq - 2.0) / 4.0));
  const double d_lo = std::abs(value - lattice_shift(lo));
  const double d_hi = std::abs(lattice_shift(lo + 1) - value);
  return d_hi < d_lo ? lo + 1 : lo;
}

ShiftList build_shift_list(std::span<const double> v, int count) {
  if (count < 1) throw Error(ErrorKind::invalid_argument, "shift count must be positive");
  if (v.empty()) throw Error(ErrorKind::invalid_argument, "empty potential");
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  ShiftList out;
  out.v_min = *lo;
  out.v_max = *hi;
  for (int i = 0; i < count; ++i) {
    const double target = count == 1
                              ? 0.5 * (out.v_min + out.v_max)
                              : out.v_min + (out.v_max - out.v_min) * i / (count - 1);
    out.lattice.push_back(nearest_lattice_index(target));
  }
  std::sort(out.lattice.begin(), out.lattice.end());
  out.lattice.erase(std::unique(out.lattice.begin(), out.lattice.end()), out.lattice.end());
  for (int m : out.lattice) out.shifts.push_back(lattice_shift(m));
  return out;
}

Eigen::MatrixXd far_field_gram(const GridSpec& grid, std::span<const double> g,
                               std::span<const double> a, int t) {
  check_radius(grid, t);
  const auto offsets = cube_offsets(grid.dim(), t);
  const auto m = static_cast<Eigen::Index>(offsets.size());
  Eigen::MatrixXd near(m, m);
  Eigen::MatrixXd gram(m, m);
  for (Eigen::Index p = 0; p < m; ++p)
    for (Eigen::Index q = 0; q < m; ++q) {
      near(p, q) = kernel_at(grid, g, offsets[p], offsets[q]);
      gram(p, q) = kernel_at(grid, a, offsets[p], offsets[q]);
    }
  gram.noalias() -= near * near.transpose();
  return gram;
}

Stencil stencil_from_kernels(const GridSpec& grid, double shift, int t,
                             std::span<const double> g, std::span<const double> a) {
  check_radius(grid, t);
  grid.require_conforming(g, "kernel");
  grid.require_conforming(a, "autocorrelation");

  Stencil st;
  st.shift = shift;
  st.t = t;
  st.offsets = cube_offsets(grid.dim(), t);
  const auto m = static_cast<Eigen::Index>(st.offsets.size());

  st.green_block.resize(m, m);
  for (Eigen::Index p = 0; p < m; ++p)
    for (Eigen::Index q = 0; q < m; ++q)
      st.green_block(p, q) = kernel_at(grid, g, st.offsets[p], st.offsets[q]);

  Eigen::MatrixXd gram(m, m);
  for (Eigen::Index p = 0; p < m; ++p)
    for (Eigen::Index q = 0; q < m; ++q)
      gram(p, q) = kernel_at(grid, a, st.offsets[p], st.offsets[q]);
  gram.noalias() -= st.green_block * st.green_block.transpose();
  gram = 0.5 * (gram + gram.transpose()).eval();

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram);
  if (eig.info() != Eigen::Success)
    throw Error(ErrorKind::singular, "eigendecomposition of the far-field Gram matrix failed");
  Eigen::VectorXd alpha = eig.eigenvectors().col(0);
  alpha.normalize();

  Eigen::Index lead = 0;
  for (Eigen::Index p = 1; p < m; ++p)
    if (std::abs(alpha(p)) > std::abs(alpha(lead))) lead = p;
  if (alpha(lead) < 0.0) alpha = -alpha;

  st.min_eigenvalue = eig.eigenvalues()(0);
  st.sigma_min = std::sqrt(std::max(st.min_eigenvalue, 0.0));
  st.alpha.assign(alpha.data(), alpha.data() + m);
  const Eigen::VectorXd c = st.green_block.transpose() * alpha;
  st.c_row.assign(c.data(), c.data() + m);
  return st;
}

Stencil compute_stencil(const GridSpec& grid, double shift, int t) {
  check_radius(grid, t);
  const RealField g = greens_kernel(grid, shift);
  const RealField a = kernel_autocorrelation(grid, g);
  return stencil_from_kernels(grid, shift, t, g, a);
}

StencilTable::StencilTable(GridSpec grid, ShiftList shifts, int t_max,
                           std::vector<Stencil> stencils, int autocorrelations)
    : grid_(grid),
      shifts_(std::move(shifts)),
      t_max_(t_max),
      stencils_(std::move(stencils)),
      autocorrelations_(autocorrelations) {}

const Stencil& StencilTable::at(std::size_t shift_index, int t) const {
  if (shift_index >= shifts_.size() || t < 1 || t > t_max_)
    throw Error(ErrorKind::invalid_argument,
                "no stencil for shift index " + std::to_string(shift_index) + " and t = " +
                    std::to_string(t));
  return stencils_[shift_index * t_max_ + (t - 1)];
}

StencilTable build_stencil_table(const GridSpec& grid, const ShiftList& shifts, int t_max,
                                 int threads) {
  if (t_max < 1) throw Error(ErrorKind::invalid_argument, "t_max must be at least 1");
  check_radius(grid, t_max);
  if (shifts.size() == 0) throw Error(ErrorKind::invalid_argument, "empty shift list");
  if (threads <= 0) threads = threads_from_env();

  const std::size_t count = shifts.size();
  std::vector<Stencil> stencils(count * t_max);
  std::atomic<std::size_t> next{0};
  std::atomic<int> autocorrelations{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto worker = [&] {
    for (std::size_t s = next++; s < count; s = next++) {
      try {
        const RealField g = greens_kernel(grid, shifts.shifts[s]);
        const RealField a = kernel_autocorrelation(grid, g);
        ++autocorrelations;
        for (int t = 1; t <= t_max; ++t)
          stencils[s * t_max + (t - 1)] = stencil_from_kernels(grid, shifts.shifts[s], t, g, a);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };

  const int pool = std::min<int>(threads, static_cast<int>(count));
  if (pool <= 1) {
    worker();
  } else {
    std::vector<std::jthread> workers;
    for (int i = 0; i < pool; ++i) workers.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);
  return StencilTable(grid, shifts, t_max, std::move(stencils), autocorrelations.load());
}

std::vector<int> assign_shifts(std::span<const double> v, const ShiftList& shifts) {
  if (shifts.size() == 0) throw Error(ErrorKind::invalid_argument, "empty shift list");
  std::vector<int> out(v.size());
  const auto& s = shifts.shifts;
  for (std::size_t j = 0; j < v.size(); ++j) {
    // s is sorted: the nearest is the first element >= v_j or its predecessor.
    const auto it = std::lower_bound(s.begin(), s.end(), v[j]);
    std::size_t idx;
    if (it == s.begin()) {
      idx = 0;
    } else if (it == s.end()) {
      idx = s.size() - 1;
    } else {
      const std::size_t hi = it - s.begin();
      idx = (*it - v[j]) < (v[j] - s[hi - 1]) ? hi : hi - 1;
    }
    out[j] = static_cast<int>(idx);
  }
  return out;
}

SparseSystem assemble_sparse_system(const GridSpec& grid, std::span<const double> v,
                                    const StencilTable& table, std::span<const int> t_map,
                                    std::span<const int> shift_index) {
  grid.require_conforming(v, "potential");
  const auto n_points = static_cast<std::size_t>(grid.size());
  if (t_map.size() != n_points || shift_index.size() != n_points)
    throw Error(ErrorKind::shape_mismatch, "t map or shift assignment does not match the grid");
  if (!(table.grid() == grid))
    throw Error(ErrorKind::shape_mismatch, "stencil table built for a different grid");

  SparseSystem sys{grid, {}, {}, std::vector<int>(shift_index.begin(), shift_index.end()),
                   std::vector<int>(t_map.begin(), t_map.end())};
  for (CsrMatrix* m : {&sys.C, &sys.P}) {
    m->rows = grid.size();
    m->row_ptr.assign(1, 0);
  }

  std::vector<std::pair<std::int32_t, std::size_t>> row;  // (column, stencil slot)
  for (std::size_t j = 0; j < n_points; ++j) {
    const Stencil& st = table.at(static_cast<std::size_t>(shift_index[j]), t_map[j]);
    row.clear();
    for (std::size_t p = 0; p < st.offsets.size(); ++p)
      row.emplace_back(static_cast<std::int32_t>(grid.shifted(j, st.offsets[p])), p);
    std::sort(row.begin(), row.end());
    for (const auto& [col, p] : row) {
      const double c = st.c_row[p];
      sys.C.cols.push_back(col);
      sys.C.values.push_back(c);
      sys.P.cols.push_back(col);
      sys.P.values.push_back(st.alpha[p] + c * (v[col] - st.shift));
    }
    sys.C.row_ptr.push_back(static_cast<std::int64_t>(sys.C.cols.size()));
    sys.P.row_ptr.push_back(static_cast<std::int64_t>(sys.P.cols.size()));
  }
  return sys;
}

CsrMatrix q_rows(const SparseSystem& sys, const StencilTable& table) {
  const GridSpec& grid = sys.grid;
  CsrMatrix q;
  q.rows = grid.size();
  std::vector<std::pair<std::int32_t, double>> row;
  for (std::int64_t j = 0; j < grid.size(); ++j) {
    const Stencil& st = table.at(static_cast<std::size_t>(sys.shift_index[j]), sys.t_map[j]);
    row.clear();
    for (std::size_t p = 0; p < st.offsets.size(); ++p)
      row.emplace_back(static_cast<std::int32_t>(grid.shifted(j, st.offsets[p])), st.alpha[p]);
    std::sort(row.begin(), row.end());
    for (const auto& [col, value] : row) {
      q.cols.push_back(col);
      q.values.push_back(value);
    }
    q.row_ptr.push_back(static_cast<std::int64_t>(q.cols.size()));
  }
  return q;
}

std::vector<ProfileEntry> qg_row_profile(const GridSpec& grid, double shift, int t,
                                         std::int64_t j) {
  if (j < 0 || j >= grid.size())
    throw Error(ErrorKind::invalid_argument, "profile row outside the grid");
  const RealField g = greens_kernel(grid, shift);
  const RealField a = kernel_autocorrelation(grid, g);
  const Stencil st = stencil_from_kernels(grid, shift, t, g, a);

  std::vector<ProfileEntry> out(static_cast<std::size_t>(grid.size()));
  std::vector<std::int64_t> support;
  for (const Coord& off : st.offsets) support.push_back(grid.shifted(j, off));
  for (std::int64_t col = 0; col < grid.size(); ++col) {
    // (QG)[j, col] = sum_p alpha_p g[(j + off_p) - col]
    double acc = 0.0;
    for (std::size_t p = 0; p < st.offsets.size(); ++p) {
      const Coord row_c = grid.coords(support[p]);
      const Coord col_c = grid.coords(col);
      acc += st.alpha[p] * kernel_at(grid, g, row_c, col_c);
    }
    out[col] = {col, std::abs(acc),
                std::find(support.begin(), support.end(), col) != support.end()};
  }
  return out;
}

}  // namespace perisolve
