#include "perisolve/nested_dissection.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <deque>
#include <limits>
#include <string>
#include <utility>

#include "perisolve/error.hpp"
#include "perisolve/stencil.hpp"

namespace perisolve {

namespace {

void check_spacing(const GridSpec& grid, int spacing) {
  if (spacing < 2 || grid.n() % spacing != 0)
    throw Error(ErrorKind::invalid_argument,
                "separator spacing " + std::to_string(spacing) + " must be >= 2 and divide n = " +
                    std::to_string(grid.n()));
}

// Reach of the stencil along one dimension from coordinate c.
int axis_reach(int c, int spacing) {
  const int r = c % spacing;
  return r == 0 ? spacing : std::min(r, spacing - r);
}

// Bisection level of a separator coordinate c = spacing * m among K = n /
// spacing hyperplanes; 0 is the coarsest (m = 0 and m = K/2 cut the torus
// first).
int separator_level(int m, int boxes) {
  if (boxes <= 2) return 0;
  const int half = boxes / 2;
  if (m % half == 0) return 0;
  return std::countr_zero(static_cast<unsigned>(half)) -
         std::countr_zero(static_cast<unsigned>(m));
}

}  // namespace

std::vector<int> t_assignment(const GridSpec& grid, int spacing, int t_max) {
  check_spacing(grid, spacing);
  if (t_max < 1 || t_max > spacing || t_max > 4)
    throw Error(ErrorKind::invalid_argument,
                "t_max must lie in [1, min(4, spacing)], got " + std::to_string(t_max));
  std::vector<int> out(static_cast<std::size_t>(grid.size()));
  for (std::int64_t j = 0; j < grid.size(); ++j) {
    const Coord c = grid.coords(j);
    int t = t_max;
    for (int k = 0; k < grid.dim(); ++k) t = std::min(t, axis_reach(c[k], spacing));
    out[j] = t;
  }
  return out;
}

bool interaction_allowed(const GridSpec& grid, int spacing, std::int64_t j, std::int64_t i) {
  const Coord a = grid.coords(j);
  const Coord b = grid.coords(i);
  const int n = grid.n();
  for (int k = 0; k < grid.dim(); ++k) {
    const int delta = periodic_delta(a[k], b[k], n);
    const int step = delta > 0 ? 1 : -1;
    for (int s = step; std::abs(s) < std::abs(delta); s += step) {
      const int c = ((a[k] + s) % n + n) % n;
      if (c % spacing == 0) return false;
    }
  }
  return true;
}

int separator_count(const GridSpec& grid, int spacing, std::int64_t point) {
  const Coord c = grid.coords(point);
  int count = 0;
  for (int k = 0; k < grid.dim(); ++k) count += c[k] % spacing == 0 ? 1 : 0;
  return count;
}

EliminationPlan nd_ordering(const GridSpec& grid, int spacing) {
  check_spacing(grid, spacing);
  const int boxes = grid.n() / spacing;
  if (!std::has_single_bit(static_cast<unsigned>(boxes)))
    throw Error(ErrorKind::invalid_argument,
                "n / spacing must be a power of two, got " + std::to_string(boxes));
  const int d = grid.dim();
  const int levels = boxes <= 2 ? 1 : std::countr_zero(static_cast<unsigned>(boxes));
  const int ranks = levels * d;

  EliminationPlan plan{grid, spacing, ranks + 1, {}, {}, {}, {}};
  const auto npts = static_cast<std::size_t>(grid.size());
  plan.group.resize(npts);

  // A point belongs to the coarsest separator hyperplane through it. Rank
  // level * d + k orders hyperplanes from the first cut (rank 0) onwards;
  // group = ranks - rank so that leaf interiors are group 0.
  for (std::size_t j = 0; j < npts; ++j) {
    const Coord c = grid.coords(static_cast<std::int64_t>(j));
    int rank = ranks;
    for (int k = 0; k < d; ++k) {
      if (c[k] % spacing != 0) continue;
      rank = std::min(rank, separator_level(c[k] / spacing, boxes) * d + k);
    }
    plan.group[j] = ranks - rank;
  }

  // Blocks are connected components (face adjacency) within each group.
  std::vector<std::int64_t> component(npts, -1);
  struct Piece {
    int group;
    std::vector<std::int64_t> points;
  };
  std::vector<Piece> pieces;
  std::deque<std::int64_t> queue;
  for (std::size_t seed = 0; seed < npts; ++seed) {
    if (component[seed] >= 0) continue;
    Piece piece{plan.group[seed], {}};
    component[seed] = static_cast<std::int64_t>(pieces.size());
    queue.push_back(static_cast<std::int64_t>(seed));
    while (!queue.empty()) {
      const std::int64_t p = queue.front();
      queue.pop_front();
      piece.points.push_back(p);
      for (int k = 0; k < d; ++k)
        for (int step : {-1, 1}) {
          Coord off{0, 0, 0};
          off[k] = step;
          const std::int64_t q = grid.shifted(p, off);
          if (component[q] < 0 && plan.group[q] == piece.group) {
            component[q] = component[seed];
            queue.push_back(q);
          }
        }
    }
    std::sort(piece.points.begin(), piece.points.end());
    pieces.push_back(std::move(piece));
  }
  std::stable_sort(pieces.begin(), pieces.end(),
                   [](const Piece& a, const Piece& b) { return a.group < b.group; });

  plan.order.reserve(npts);
  for (const Piece& piece : pieces) {
    EliminationBlock block;
    block.begin = static_cast<std::int64_t>(plan.order.size());
    block.group = piece.group;
    plan.order.insert(plan.order.end(), piece.points.begin(), piece.points.end());
    block.end = static_cast<std::int64_t>(plan.order.size());
    plan.blocks.push_back(block);
  }
  plan.position.resize(npts);
  for (std::size_t p = 0; p < npts; ++p) plan.position[plan.order[p]] = static_cast<std::int64_t>(p);
  return plan;
}

namespace {

CsrMatrix transpose(const CsrMatrix& a) {
  CsrMatrix t;
  t.rows = a.rows;
  t.row_ptr.assign(static_cast<std::size_t>(a.rows) + 1, 0);
  for (auto c : a.cols) ++t.row_ptr[c + 1];
  for (std::int64_t r = 0; r < a.rows; ++r) t.row_ptr[r + 1] += t.row_ptr[r];
  t.cols.resize(a.cols.size());
  t.values.resize(a.values.size());
  std::vector<std::int64_t> fill(t.row_ptr.begin(), t.row_ptr.end() - 1);
  for (std::int64_t r = 0; r < a.rows; ++r)
    for (std::int64_t p = a.row_ptr[r]; p < a.row_ptr[r + 1]; ++p) {
      const std::int64_t dst = fill[a.cols[p]]++;
      t.cols[dst] = static_cast<std::int32_t>(r);
      t.values[dst] = a.values[p];
    }
  return t;
}

// In-place partial LU of the leading f columns of a front. Pivot rows are
// restricted to the leading f rows. On return the front holds L11\U11, L21,
// U12 and the Schur complement in its four quadrants.
void factor_front(Eigen::MatrixXd& front, Eigen::Index f, double threshold, double tiny,
                  std::vector<int>& pivots) {
  const Eigen::Index rows = front.rows();
  const Eigen::Index cols = front.cols();
  constexpr Eigen::Index kPanel = 48;
  pivots.resize(static_cast<std::size_t>(f));

  for (Eigen::Index k0 = 0; k0 < f; k0 += kPanel) {
    const Eigen::Index kb = std::min(kPanel, f - k0);
    const Eigen::Index panel_end = k0 + kb;
    for (Eigen::Index k = k0; k < panel_end; ++k) {
      Eigen::Index best = k;
      double amax = 0.0;
      for (Eigen::Index i = k; i < f; ++i) {
        const double a = std::abs(front(i, k));
        if (a > amax) {
          amax = a;
          best = i;
        }
      }
      if (!(amax > tiny))
        throw Error(ErrorKind::singular,
                    "no admissible pivot in a nested-dissection block (max " +
                        std::to_string(amax) + ")");
      const Eigen::Index piv = std::abs(front(k, k)) >= threshold * amax ? k : best;
      pivots[k] = static_cast<int>(piv);
      if (piv != k) front.row(k).swap(front.row(piv));

      const double inv = 1.0 / front(k, k);
      const Eigen::Index below = rows - k - 1;
      front.col(k).tail(below) *= inv;
      const Eigen::Index rest = panel_end - k - 1;
      if (rest > 0 && below > 0)
        front.block(k + 1, k + 1, below, rest).noalias() -=
            front.col(k).tail(below) * front.row(k).segment(k + 1, rest);
    }
    const Eigen::Index right = cols - panel_end;
    if (right > 0) {
      front.block(k0, panel_end, kb, right) =
          front.block(k0, k0, kb, kb).triangularView<Eigen::UnitLower>().solve(
              front.block(k0, panel_end, kb, right));
      const Eigen::Index below = rows - panel_end;
      if (below > 0)
        front.block(panel_end, panel_end, below, right).noalias() -=
            front.block(panel_end, k0, below, kb) * front.block(k0, panel_end, kb, right);
    }
  }
}

}  // namespace

Factorization factorize(const CsrMatrix& P, const EliminationPlan& plan, double pivot_threshold) {
  const std::int64_t n = P.rows;
  if (n != plan.grid.size())
    throw Error(ErrorKind::shape_mismatch, "matrix and elimination plan sizes differ");
  const CsrMatrix Pt = transpose(P);

  double pmax = 0.0;
  for (double v : P.values) pmax = std::max(pmax, std::abs(v));
  const double tiny = 1e-14 * pmax;

  Factorization fac;
  fac.order_ = plan.order;
  const auto& pos = plan.position;
  const auto& order = plan.order;
  const std::size_t nblocks = plan.blocks.size();
  std::vector<std::int64_t> block_of(static_cast<std::size_t>(n));
  for (std::size_t b = 0; b < nblocks; ++b)
    for (std::int64_t p = plan.blocks[b].begin; p < plan.blocks[b].end; ++p) block_of[p] = static_cast<std::int64_t>(b);

  // Symbolic phase on the pattern of P + P^T.
  fac.nodes_.resize(nblocks);
  std::vector<std::vector<std::int64_t>> children(nblocks);
  std::vector<std::int64_t> mark(static_cast<std::size_t>(n), -1);
  for (std::size_t b = 0; b < nblocks; ++b) {
    auto& node = fac.nodes_[b];
    node.begin = plan.blocks[b].begin;
    node.end = plan.blocks[b].end;
    auto& s = node.structure;
    const auto tag = static_cast<std::int64_t>(b);
    auto add = [&](std::int64_t q) {
      if (q >= node.end && mark[q] != tag) {
        mark[q] = tag;
        s.push_back(q);
      }
    };
    for (std::int64_t p = node.begin; p < node.end; ++p) {
      const std::int64_t pt = order[p];
      for (std::int64_t e = P.row_ptr[pt]; e < P.row_ptr[pt + 1]; ++e) add(pos[P.cols[e]]);
      for (std::int64_t e = Pt.row_ptr[pt]; e < Pt.row_ptr[pt + 1]; ++e) add(pos[Pt.cols[e]]);
    }
    for (std::int64_t c : children[b])
      for (std::int64_t q : fac.nodes_[c].structure) add(q);
    std::sort(s.begin(), s.end());
    if (!s.empty()) {
      node.parent = block_of[s.front()];
      children[node.parent].push_back(tag);
    }
  }

  // Numeric phase.
  std::vector<Eigen::MatrixXd> contributions(nblocks);
  std::vector<std::int64_t> local(static_cast<std::size_t>(n), -1);
  for (std::size_t b = 0; b < nblocks; ++b) {
    auto& node = fac.nodes_[b];
    const Eigen::Index f = node.end - node.begin;
    const auto u = static_cast<Eigen::Index>(node.structure.size());
    for (Eigen::Index i = 0; i < f; ++i) local[node.begin + i] = i;
    for (Eigen::Index i = 0; i < u; ++i) local[node.structure[i]] = f + i;

    Eigen::MatrixXd front = Eigen::MatrixXd::Zero(f + u, f + u);
    for (std::int64_t p = node.begin; p < node.end; ++p) {
      const std::int64_t pt = order[p];
      for (std::int64_t e = P.row_ptr[pt]; e < P.row_ptr[pt + 1]; ++e) {
        const std::int64_t q = pos[P.cols[e]];
        if (q >= node.begin) front(local[p], local[q]) += P.values[e];
      }
      for (std::int64_t e = Pt.row_ptr[pt]; e < Pt.row_ptr[pt + 1]; ++e) {
        const std::int64_t r = pos[Pt.cols[e]];
        if (r >= node.end) front(local[r], local[p]) += Pt.values[e];
      }
    }
    for (std::int64_t c : children[b]) {
      const auto& cs = fac.nodes_[c].structure;
      const Eigen::MatrixXd& update = contributions[c];
      std::vector<Eigen::Index> map(cs.size());
      for (std::size_t i = 0; i < cs.size(); ++i) map[i] = local[cs[i]];
      for (std::size_t jc = 0; jc < cs.size(); ++jc)
        for (std::size_t ic = 0; ic < cs.size(); ++ic)
          front(map[ic], map[jc]) += update(static_cast<Eigen::Index>(ic), static_cast<Eigen::Index>(jc));
      contributions[c] = Eigen::MatrixXd();
    }

    factor_front(front, f, pivot_threshold, tiny, node.pivots);

    node.lower = front.leftCols(f);
    node.upper = front.topRightCorner(f, u);
    if (u > 0) contributions[b] = front.bottomRightCorner(u, u);

    fac.stats_.factor_entries += (f + u) * f + f * u;
    fac.stats_.max_front = std::max<std::int64_t>(fac.stats_.max_front, f + u);
    for (Eigen::Index i = 0; i < f; ++i) local[node.begin + i] = -1;
    for (Eigen::Index i = 0; i < u; ++i) local[node.structure[i]] = -1;
  }
  fac.stats_.supernodes = static_cast<std::int64_t>(nblocks);
  return fac;
}

void Factorization::solve(std::span<const double> b, std::span<double> x) const {
  const std::int64_t n = size();
  if (static_cast<std::int64_t>(b.size()) != n || static_cast<std::int64_t>(x.size()) != n)
    throw Error(ErrorKind::shape_mismatch, "right-hand side length differs from the factorization");
  Eigen::VectorXd y(n);
  for (std::int64_t p = 0; p < n; ++p) y(p) = b[order_[p]];

  Eigen::VectorXd gathered;
  for (const Supernode& node : nodes_) {
    const Eigen::Index f = node.end - node.begin;
    auto yf = y.segment(node.begin, f);
    for (Eigen::Index k = 0; k < f; ++k)
      if (node.pivots[k] != k) std::swap(yf(k), yf(node.pivots[k]));
    node.lower.topRows(f).triangularView<Eigen::UnitLower>().solveInPlace(yf);
    const auto u = static_cast<Eigen::Index>(node.structure.size());
    if (u > 0) {
      gathered.noalias() = node.lower.bottomRows(u) * yf;
      for (Eigen::Index i = 0; i < u; ++i) y(node.structure[i]) -= gathered(i);
    }
  }
  for (auto it = nodes_.rbegin(); it != nodes_.rend(); ++it) {
    const Supernode& node = *it;
    const Eigen::Index f = node.end - node.begin;
    const auto u = static_cast<Eigen::Index>(node.structure.size());
    auto yf = y.segment(node.begin, f);
    if (u > 0) {
      gathered.resize(u);
      for (Eigen::Index i = 0; i < u; ++i) gathered(i) = y(node.structure[i]);
      yf.noalias() -= node.upper * gathered;
    }
    node.lower.topRows(f).triangularView<Eigen::Upper>().solveInPlace(yf);
  }
  for (std::int64_t p = 0; p < n; ++p) x[order_[p]] = y(p);
}

RealField Factorization::solve(std::span<const double> b) const {
  RealField x(b.size());
  solve(b, x);
  return x;
}

Preconditioner::Preconditioner(std::shared_ptr<const SparseSystem> system,
                               std::shared_ptr<const Factorization> factors)
    : system_(std::move(system)), factors_(std::move(factors)) {
  if (system_->P.rows != factors_->size())
    throw Error(ErrorKind::shape_mismatch, "factorization does not match the sparse system");
}

void Preconditioner::apply(std::span<const double> r, std::span<double> out) const {
  RealField cr(r.size());
  system_->C.multiply(r, cr);
  factors_->solve(cr, out);
}

}  // namespace perisolve
