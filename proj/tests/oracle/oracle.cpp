#include "oracle.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace perisolve::oracle {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void check_cap(const GridSpec& grid) {
  if (grid.size() > kMaxUnknowns)
    throw std::length_error("oracle limited to " + std::to_string(kMaxUnknowns) +
                            " unknowns, got " + std::to_string(grid.size()));
}

int signed_frequency(int idx, int n) { return idx < n / 2 ? idx : idx - n; }

// cos(2 pi m / n) for m = 0..n-1
std::vector<double> cosine_table(int n) {
  std::vector<double> c(n);
  for (int m = 0; m < n; ++m) c[m] = std::cos(kTwoPi * m / n);
  return c;
}

Coord unflatten(std::int64_t idx, int d, int n) {
  Coord c{0, 0, 0};
  for (int k = d - 1; k >= 0; --k) {
    c[k] = static_cast<int>(idx % n);
    idx /= n;
  }
  return c;
}

std::int64_t flatten(const Coord& c, int d, int n) {
  std::int64_t idx = 0;
  for (int k = 0; k < d; ++k) idx = idx * n + (((c[k] % n) + n) % n);
  return idx;
}

// Kernel value at displacement index `delta` of the circulant with symbol
// `symbol(k)`, computed as (1/N) sum_k symbol(k) cos(2 pi k . delta / n).
template <class Symbol>
std::vector<double> circulant_kernel(const GridSpec& grid, Symbol symbol) {
  const int d = grid.dim(), n = grid.n();
  const std::int64_t N = grid.size();
  const auto table = cosine_table(n);
  std::vector<double> sym(N);
  std::vector<Coord> freq(N);
  for (std::int64_t k = 0; k < N; ++k) {
    freq[k] = unflatten(k, d, n);
    int k2 = 0;
    for (int a = 0; a < d; ++a) {
      const int kk = signed_frequency(freq[k][a], n);
      k2 += kk * kk;
    }
    sym[k] = symbol(k2);
  }
  std::vector<double> kernel(N);
  for (std::int64_t delta = 0; delta < N; ++delta) {
    const Coord c = unflatten(delta, d, n);
    double sum = 0.0;
    for (std::int64_t k = 0; k < N; ++k) {
      long phase = 0;
      for (int a = 0; a < d; ++a) phase += static_cast<long>(freq[k][a]) * c[a];
      sum += sym[k] * table[phase % n];
    }
    kernel[delta] = sum / static_cast<double>(N);
  }
  return kernel;
}

Eigen::MatrixXd circulant_matrix(const GridSpec& grid, const std::vector<double>& kernel) {
  const int d = grid.dim(), n = grid.n();
  const std::int64_t N = grid.size();
  Eigen::MatrixXd M(N, N);
  for (std::int64_t i = 0; i < N; ++i) {
    const Coord ci = unflatten(i, d, n);
    for (std::int64_t j = 0; j < N; ++j) {
      const Coord cj = unflatten(j, d, n);
      Coord diff{0, 0, 0};
      for (int a = 0; a < d; ++a) diff[a] = ci[a] - cj[a];
      M(i, j) = kernel[flatten(diff, d, n)];
    }
  }
  return M;
}

}  // namespace

Eigen::MatrixXd dense_assemble(const GridSpec& grid, std::span<const double> v) {
  check_cap(grid);
  if (static_cast<std::int64_t>(v.size()) != grid.size())
    throw std::invalid_argument("potential size does not match the grid");
  const double four_pi2 = 4.0 * std::numbers::pi * std::numbers::pi;
  Eigen::MatrixXd A =
      circulant_matrix(grid, circulant_kernel(grid, [&](int k2) { return four_pi2 * k2; }));
  for (std::int64_t i = 0; i < grid.size(); ++i) A(i, i) += v[i];
  return A;
}

std::vector<double> green_kernel_direct(const GridSpec& grid, double shift) {
  check_cap(grid);
  const double four_pi2 = 4.0 * std::numbers::pi * std::numbers::pi;
  return circulant_kernel(grid, [&](int k2) { return 1.0 / (four_pi2 * k2 + shift); });
}

Eigen::MatrixXd dense_green(const GridSpec& grid, double shift) {
  return circulant_matrix(grid, green_kernel_direct(grid, shift));
}

Eigen::VectorXd dense_solve(const Eigen::MatrixXd& A, const Eigen::VectorXd& b) {
  if (A.rows() > kMaxUnknowns) throw std::length_error("oracle size cap exceeded");
  return A.partialPivLu().solve(b);
}

Eigen::MatrixXd dense_block(const Eigen::MatrixXd& G, std::span<const std::int64_t> rows,
                            std::span<const std::int64_t> cols) {
  Eigen::MatrixXd B(rows.size(), cols.size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols.size(); ++j) B(i, j) = G(rows[i], cols[j]);
  return B;
}

SvdBlock dense_svd_block(const Eigen::MatrixXd& G, std::span<const std::int64_t> rows,
                         std::span<const std::int64_t> cols) {
  if (rows.size() > cols.size()) throw std::invalid_argument("block must be wide");
  const Eigen::MatrixXd B = dense_block(G, rows, cols);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(B, Eigen::ComputeThinU);
  const Eigen::Index last = svd.singularValues().size() - 1;
  return {svd.singularValues()(last), svd.matrixU().col(last)};
}

std::vector<std::int64_t> neighbourhood(const GridSpec& grid, std::int64_t center, int t) {
  const int d = grid.dim(), n = grid.n();
  const Coord c = unflatten(center, d, n);
  std::vector<std::int64_t> out;
  const int w = 2 * t + 1;
  std::int64_t count = 1;
  for (int a = 0; a < d; ++a) count *= w;
  for (std::int64_t m = 0; m < count; ++m) {
    Coord off = unflatten(m, d, w);
    Coord p{0, 0, 0};
    for (int a = 0; a < d; ++a) p[a] = c[a] + off[a] - t;
    out.push_back(flatten(p, d, n));
  }
  return out;
}

std::vector<std::int64_t> complement(const GridSpec& grid, std::span<const std::int64_t> set) {
  std::vector<char> in(grid.size(), 0);
  for (auto i : set) in[i] = 1;
  std::vector<std::int64_t> out;
  for (std::int64_t i = 0; i < grid.size(); ++i)
    if (!in[i]) out.push_back(i);
  return out;
}

}  // namespace perisolve::oracle
