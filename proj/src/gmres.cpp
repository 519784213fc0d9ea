#include "perisolve/gmres.hpp"

#include <Eigen/Dense>

#include <chrono>
#include <cmath>
#include <string>

#include "perisolve/error.hpp"

namespace perisolve {

namespace {

void check_finite(const Eigen::VectorXd& v, const char* what) {
  if (!v.allFinite())
    throw Error(ErrorKind::breakdown, std::string("non-finite values in ") + what);
}

}  // namespace

GmresResult gmres(const LinearOperator& apply_A, const LinearOperator& apply_M,
                  std::span<const double> b, const GmresOptions& options) {
  if (!(options.tol > 0.0)) throw Error(ErrorKind::invalid_argument, "tolerance must be positive");
  if (options.restart < 1) throw Error(ErrorKind::invalid_argument, "restart must be at least 1");
  if (options.max_iterations < 1)
    throw Error(ErrorKind::invalid_argument, "iteration cap must be at least 1");

  const auto start = std::chrono::steady_clock::now();
  const auto n = static_cast<Eigen::Index>(b.size());
  const Eigen::Map<const Eigen::VectorXd> rhs(b.data(), n);
  GmresResult result;
  result.solution.assign(b.size(), 0.0);
  SolveReport& report = result.report;
  Eigen::Map<Eigen::VectorXd> x(result.solution.data(), n);

  Eigen::VectorXd tmp(n);
  Eigen::VectorXd w(n);
  auto precondition = [&](const Eigen::VectorXd& in, Eigen::VectorXd& out) {
    apply_M(std::span<const double>(in.data(), n), std::span<double>(out.data(), n));
    check_finite(out, "preconditioner output");
  };
  auto multiply = [&](const Eigen::VectorXd& in, Eigen::VectorXd& out) {
    apply_A(std::span<const double>(in.data(), n), std::span<double>(out.data(), n));
    check_finite(out, "operator output");
  };

  const double b_norm = rhs.norm();
  if (b_norm == 0.0) {
    report.converged = true;
    report.timings.total_solve =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return result;
  }

  Eigen::VectorXd r(n);
  precondition(rhs, r);
  const double mb_norm = r.norm();
  if (mb_norm == 0.0) throw Error(ErrorKind::breakdown, "preconditioner annihilates the right-hand side");

  const int m = options.restart;
  Eigen::MatrixXd V(n, m + 1);
  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(m + 1, m);
  Eigen::VectorXd cs(m), sn(m), g(m + 1);

  double beta = mb_norm;
  while (report.iterations < options.max_iterations) {
    V.col(0) = r / beta;
    g.setZero();
    g(0) = beta;
    H.setZero();
    int k = 0;
    bool stop = false;
    double scale = 0.0;
    for (; k < m && report.iterations < options.max_iterations; ++k) {
      tmp = V.col(k);
      multiply(tmp, w);
      precondition(w, tmp);
      w = tmp;
      ++report.iterations;

      const double before = w.norm();
      scale = std::max(scale, before);
      for (int i = 0; i <= k; ++i) {
        const double hij = V.col(i).dot(w);
        H(i, k) = hij;
        w -= hij * V.col(i);
      }
      double after = w.norm();
      if (after < (1.0 - 1e-3) * before) {
        for (int i = 0; i <= k; ++i) {
          const double corr = V.col(i).dot(w);
          H(i, k) += corr;
          w -= corr * V.col(i);
        }
        after = w.norm();
      }
      H(k + 1, k) = after;
      const bool lucky = after <= 1e-14 * scale;
      if (!lucky) V.col(k + 1) = w / after;

      for (int i = 0; i < k; ++i) {
        const double h0 = H(i, k);
        const double h1 = H(i + 1, k);
        H(i, k) = cs(i) * h0 + sn(i) * h1;
        H(i + 1, k) = -sn(i) * h0 + cs(i) * h1;
      }
      const double denom = std::hypot(H(k, k), H(k + 1, k));
      cs(k) = H(k, k) / denom;
      sn(k) = H(k + 1, k) / denom;
      H(k, k) = denom;
      H(k + 1, k) = 0.0;
      g(k + 1) = -sn(k) * g(k);
      g(k) = cs(k) * g(k);

      const double rel = std::abs(g(k + 1)) / mb_norm;
      report.residual_history.push_back(rel);
      if (rel <= options.tol) {
        report.converged = true;
        stop = true;
        ++k;
        break;
      }
      if (lucky) {
        stop = true;
        ++k;
        break;
      }
    }

    const Eigen::VectorXd y =
        H.topLeftCorner(k, k).triangularView<Eigen::Upper>().solve(g.head(k));
    x += V.leftCols(k) * y;

    const Eigen::MatrixXd gram = V.leftCols(k + (stop ? 0 : 1)).transpose() *
                                 V.leftCols(k + (stop ? 0 : 1));
    const double loss =
        (gram - Eigen::MatrixXd::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff();
    report.max_orthogonality_loss = std::max(report.max_orthogonality_loss, loss);

    if (stop) break;
    ++report.restarts;
    multiply(x, w);
    w = rhs - w;
    precondition(w, r);
    beta = r.norm();
    if (beta / mb_norm <= options.tol) {
      report.converged = true;
      break;
    }
  }

  multiply(x, w);
  report.true_residual = (w - rhs).norm() / b_norm;
  report.timings.total_solve =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

}  // namespace perisolve
