#include "perisolve/experiment.hpp"

#include <algorithm>
#include <chrono>

#include "perisolve/spectral.hpp"

namespace perisolve {

namespace {
using Clock = std::chrono::steady_clock;
double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}
}  // namespace

int preset_shift_count(int d, int n) {
  return std::max(4, d == 3 ? n / 4 : n / 16);
}

ExperimentResult solve_periodic(const GridSpec& grid, RealField potential, RealField rhs,
                                int shift_count, int t_max, int leaf, const GmresOptions& gmres_opts) {
  grid.require_conforming(potential, "potential");
  grid.require_conforming(rhs, "right-hand side");
  ExperimentResult out{grid, std::move(potential), std::move(rhs), {}, {}, {}, {}};
  const RealField& v = out.potential;

  auto t0 = Clock::now();
  out.shifts = build_shift_list(v, shift_count);
  const StencilTable table = build_stencil_table(grid, out.shifts, t_max);
  const double t_stencil = seconds_since(t0);

  t0 = Clock::now();
  const std::vector<int> t_map = t_assignment(grid, leaf, t_max);
  const std::vector<int> shift_idx = assign_shifts(v, out.shifts);
  auto system = std::make_shared<const SparseSystem>(
      assemble_sparse_system(grid, v, table, t_map, shift_idx));
  const EliminationPlan plan = nd_ordering(grid, leaf);
  auto factors = std::make_shared<const Factorization>(factorize(system->P, plan));
  const double t_setup = seconds_since(t0);
  out.factor_stats = factors->stats();

  const SpectralOperator op(grid, v);
  const Preconditioner precond(system, factors);
  double t_apply = 0.0;
  const LinearOperator apply_A = [&op](std::span<const double> in, std::span<double> o) {
    op.apply(in, o);
  };
  const LinearOperator apply_M = [&](std::span<const double> in, std::span<double> o) {
    const auto s = Clock::now();
    precond.apply(in, o);
    t_apply += seconds_since(s);
  };
  GmresResult res = gmres(apply_A, apply_M, out.rhs, gmres_opts);
  out.solution = std::move(res.solution);
  out.report = std::move(res.report);
  out.report.timings.stencil = t_stencil;
  out.report.timings.nd_setup = t_setup;
  out.report.timings.nd_solve = t_apply;
  return out;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  const GridSpec grid = make_grid(cfg.problem.d, cfg.problem.n);
  RealField v = make_potential(cfg.problem);
  RealField f = gaussian_rhs(grid);
  const int count = cfg.shift_count > 0 ? cfg.shift_count : preset_shift_count(grid.dim(), grid.n());
  return solve_periodic(grid, std::move(v), std::move(f), count, cfg.t_max, cfg.leaf, cfg.gmres);
}

}  // namespace perisolve
