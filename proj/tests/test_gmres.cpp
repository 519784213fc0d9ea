#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "oracle.hpp"
#include "perisolve/error.hpp"
#include "perisolve/gmres.hpp"
#include "support.hpp"

using namespace perisolve;

namespace {

LinearOperator identity() {
  return [](std::span<const double> in, std::span<double> out) {
    std::copy(in.begin(), in.end(), out.begin());
  };
}

LinearOperator dense(const Eigen::MatrixXd& A) {
  return [A](std::span<const double> in, std::span<double> out) {
    Eigen::Map<Eigen::VectorXd>(out.data(), static_cast<Eigen::Index>(out.size())) =
        A * test::as_eigen(in);
  };
}

Eigen::MatrixXd well_conditioned(int n, std::uint64_t seed) {
  const auto r = test::random_vector(static_cast<std::size_t>(n) * n, seed);
  Eigen::MatrixXd A = Eigen::Map<const Eigen::MatrixXd>(r.data(), n, n) / std::sqrt(n);
  A.diagonal().array() += 3.0;
  return A;
}

}  // namespace

TEST(Gmres, IdentityConvergesInOne) {
  const auto b = test::random_vector(30, 1);
  const GmresResult r = gmres(identity(), identity(), b);
  EXPECT_TRUE(r.report.converged);
  EXPECT_EQ(r.report.iterations, 1);
  EXPECT_LE(test::relative_difference(r.solution, b), 1e-14);
}

TEST(Gmres, ExactInverseConvergesInOne) {
  const int n = 64;
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
  Eigen::MatrixXd Ainv = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    A(i, i) = i + 1.0;
    Ainv(i, i) = 1.0 / (i + 1.0);
  }
  const auto b = test::random_vector(n, 2);
  const GmresResult r = gmres(dense(A), dense(Ainv), b);
  EXPECT_TRUE(r.report.converged);
  EXPECT_EQ(r.report.iterations, 1);

  const Eigen::MatrixXd B = well_conditioned(n, 3);
  const GmresResult r2 = gmres(dense(B), dense(B.inverse()), b);
  EXPECT_EQ(r2.report.iterations, 1);
}

TEST(Gmres, DenseSystemMatchesDirectSolve) {
  const Eigen::MatrixXd A = well_conditioned(50, 4);
  const auto b = test::random_vector(50, 5);
  GmresOptions opt;
  opt.tol = 1e-10;
  const GmresResult r = gmres(dense(A), identity(), b, opt);
  ASSERT_TRUE(r.report.converged);
  const Eigen::VectorXd ref = oracle::dense_solve(A, test::as_eigen(b));
  EXPECT_LE(test::relative_difference(r.solution, test::to_std(ref)), 1e-8);
  EXPECT_LE(r.report.true_residual, 1e-9);
  EXPECT_LE(r.report.max_orthogonality_loss, 1e-8);
}

TEST(Gmres, HistoryMonotoneWithinCycles) {
  const Eigen::MatrixXd A = well_conditioned(80, 6);
  const auto b = test::random_vector(80, 7);
  GmresOptions opt;
  opt.tol = 1e-12;
  opt.restart = 5;
  const GmresResult r = gmres(dense(A), identity(), b, opt);
  EXPECT_TRUE(r.report.converged);
  EXPECT_GT(r.report.restarts, 0);
  const auto& h = r.report.residual_history;
  ASSERT_EQ(static_cast<int>(h.size()), r.report.iterations);
  for (std::size_t i = 1; i < h.size(); ++i)
    if (i % 5 != 0) {
      EXPECT_LE(h[i], h[i - 1] * (1.0 + 1e-12)) << i;
    }
  EXPECT_LE(r.report.max_orthogonality_loss, 1e-8);
}

TEST(Gmres, IterationCapReported) {
  const Eigen::MatrixXd A = well_conditioned(80, 8);
  const auto b = test::random_vector(80, 9);
  GmresOptions opt;
  opt.tol = 1e-14;
  opt.max_iterations = 3;
  const GmresResult r = gmres(dense(A), identity(), b, opt);
  EXPECT_FALSE(r.report.converged);
  EXPECT_EQ(r.report.iterations, 3);
}

TEST(Gmres, ZeroRhs) {
  const std::vector<double> b(10, 0.0);
  const GmresResult r = gmres(identity(), identity(), b);
  EXPECT_TRUE(r.report.converged);
  EXPECT_EQ(r.report.iterations, 0);
  for (double x : r.solution) EXPECT_EQ(x, 0.0);
}

TEST(Gmres, NonFiniteOperatorOutputThrows) {
  const auto b = test::random_vector(10, 10);
  LinearOperator bad = [](std::span<const double>, std::span<double> out) {
    std::fill(out.begin(), out.end(), std::numeric_limits<double>::quiet_NaN());
  };
  EXPECT_THROW(gmres(bad, identity(), b), Error);
}

TEST(Gmres, RejectsBadOptions) {
  const auto b = test::random_vector(10, 11);
  EXPECT_THROW(gmres(identity(), identity(), b, {0.0, 40, 200}), Error);
  EXPECT_THROW(gmres(identity(), identity(), b, {1e-6, 0, 200}), Error);
}
