#pragma once

#include <memory>

#include "perisolve/gmres.hpp"
#include "perisolve/nested_dissection.hpp"
#include "perisolve/problems.hpp"
#include "perisolve/stencil.hpp"

namespace perisolve {

struct ExperimentConfig {
  ProblemConfig problem;
  int shift_count = 0;  // 0 selects preset_shift_count()
  int t_max = 2;
  int leaf = 8;         // separator spacing of the nested dissection
  GmresOptions gmres;
};

/// |S| preset: max(4, n/16) in 2D, max(4, n/4) in 3D, max(4, n/16) in 1D.
int preset_shift_count(int d, int n);

struct ExperimentResult {
  GridSpec grid;
  RealField potential;
  RealField rhs;
  RealField solution;
  ShiftList shifts;
  SolveReport report;
  FactorizationStats factor_stats;
};

/// Full pipeline: fields, shift list, stencil table, t map, assembly,
/// nested-dissection factorization, preconditioned GMRES.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

/// The same pipeline for caller-supplied v and f.
ExperimentResult solve_periodic(const GridSpec& grid, RealField potential, RealField rhs,
                                int shift_count, int t_max, int leaf, const GmresOptions& gmres);

}  // namespace perisolve
