#pragma once

#include <functional>
#include <span>
#include <vector>

#include "perisolve/grid.hpp"

namespace perisolve {

/// out = Op(in); `in` and `out` never alias.
using LinearOperator = std::function<void(std::span<const double>, std::span<double>)>;

struct StageTimings {
  double stencil = 0.0;   // seconds
  double nd_setup = 0.0;
  double nd_solve = 0.0;  // accumulated preconditioner solves
  double total_solve = 0.0;
};

struct SolveReport {
  int iterations = 0;
  int restarts = 0;
  bool converged = false;
  std::vector<double> residual_history;  // preconditioned, relative to ||M b||
  double true_residual = 0.0;            // ||A u - b|| / ||b||
  double max_orthogonality_loss = 0.0;   // max |V^T V - I| over all cycles
  StageTimings timings;
};

struct GmresOptions {
  double tol = 1e-6;
  int restart = 40;
  int max_iterations = 200;
};

struct GmresResult {
  RealField solution;
  SolveReport report;
};

/// Left-preconditioned restarted GMRES on M A u = M b from a zero initial
/// guess. Stops once ||M (A u - b)|| <= tol ||M b||. Modified Gram-Schmidt
/// with a second pass when the first one cancels more than 0.1% of the norm.
GmresResult gmres(const LinearOperator& apply_A, const LinearOperator& apply_M,
                  std::span<const double> b, const GmresOptions& options = {});

}  // namespace perisolve
