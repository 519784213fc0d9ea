#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "perisolve/grid.hpp"
#include "perisolve/sparse.hpp"

namespace perisolve {

struct SparseSystem;

// Geometry: separator hyperplanes sit at coordinates that are multiples of
// `spacing` in every dimension; the (spacing - 1)^d interiors between them
// are the leaf boxes.

/// Largest stencil radius per point such that no row couples two points with
/// a separator strictly between them, capped at t_max (t_max <= 4, <= spacing).
std::vector<int> t_assignment(const GridSpec& grid, int spacing, int t_max);

/// True if no separator coordinate lies strictly between j and i in any
/// dimension, measured along the minimal periodic displacement.
bool interaction_allowed(const GridSpec& grid, int spacing, std::int64_t j, std::int64_t i);

/// Number of coordinates of `point` on a separator: 0 for box points, d for
/// vertex points, anything between for edge (and, in 3D, face) points.
int separator_count(const GridSpec& grid, int spacing, std::int64_t point);

/// A contiguous run of the elimination order: one leaf box interior or one
/// connected separator piece.
struct EliminationBlock {
  std::int64_t begin = 0;
  std::int64_t end = 0;
  int group = 0;  // 0 for leaf interiors, larger is eliminated later
  std::int64_t size() const noexcept { return end - begin; }
};

struct EliminationPlan {
  GridSpec grid;
  int spacing = 8;
  int groups = 1;                      // number of distinct groups
  std::vector<std::int64_t> order;     // position -> grid point
  std::vector<std::int64_t> position;  // grid point -> position
  std::vector<int> group;              // per grid point
  std::vector<EliminationBlock> blocks;
};

/// Nested-dissection order on the periodic grid: leaf interiors first, then
/// separator pieces from the finest bisection level to the coarsest.
EliminationPlan nd_ordering(const GridSpec& grid, int spacing);

struct FactorizationStats {
  std::int64_t factor_entries = 0;
  std::int64_t max_front = 0;
  std::int64_t supernodes = 0;
};

/// Multifrontal LU of a sparse matrix under an elimination plan. Each plan
/// block is one supernode; pivoting uses threshold partial pivoting
/// restricted to the rows of the block being eliminated.
class Factorization {
 public:
  struct Supernode {
    std::int64_t begin = 0;
    std::int64_t end = 0;
    std::vector<std::int64_t> structure;  // positions after `end`, ascending
    std::int64_t parent = -1;
    Eigen::MatrixXd lower;  // (f + u) x f: unit-lower L11 \ U11 on top, L21 below
    Eigen::MatrixXd upper;  // f x u: U12
    std::vector<int> pivots;  // row swaps within the block, LAPACK style
  };

  std::int64_t size() const noexcept { return static_cast<std::int64_t>(order_.size()); }
  const FactorizationStats& stats() const noexcept { return stats_; }
  const std::vector<Supernode>& supernodes() const noexcept { return nodes_; }

  /// x = P^-1 b
  void solve(std::span<const double> b, std::span<double> x) const;
  RealField solve(std::span<const double> b) const;

 private:
  friend Factorization factorize(const CsrMatrix& P, const EliminationPlan& plan,
                                 double pivot_threshold);
  std::vector<std::int64_t> order_;
  std::vector<Supernode> nodes_;
  FactorizationStats stats_;
};

/// Throws ErrorKind::singular when no admissible pivot exceeds 1e-14 max|P|.
Factorization factorize(const CsrMatrix& P, const EliminationPlan& plan,
                        double pivot_threshold = 0.1);

/// M r = P^-1 (C r).
class Preconditioner {
 public:
  Preconditioner(std::shared_ptr<const SparseSystem> system,
                 std::shared_ptr<const Factorization> factors);

  void apply(std::span<const double> r, std::span<double> out) const;

 private:
  std::shared_ptr<const SparseSystem> system_;
  std::shared_ptr<const Factorization> factors_;
};

}  // namespace perisolve
