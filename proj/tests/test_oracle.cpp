#include <gtest/gtest.h>

#include "oracle.hpp"
#include "support.hpp"

using namespace perisolve;

TEST(Oracle, DenseAssemblySymmetricWithPotentialRowSums) {
  const GridSpec g = make_grid(2, 8);
  const auto v = test::random_vector(g.size(), 1, -10.0, 10.0);
  const Eigen::MatrixXd A = oracle::dense_assemble(g, v);
  EXPECT_LE((A - A.transpose()).cwiseAbs().maxCoeff(), 1e-12 * A.cwiseAbs().maxCoeff());
  const Eigen::VectorXd rows = A.rowwise().sum();
  for (std::int64_t i = 0; i < g.size(); ++i) EXPECT_NEAR(rows(i), v[i], 1e-10);
}

TEST(Oracle, DenseSolveBackwardError) {
  const GridSpec g = make_grid(2, 8);
  const auto v = test::random_vector(g.size(), 2, -300.0, -100.0);
  const Eigen::MatrixXd A = oracle::dense_assemble(g, v);
  const Eigen::VectorXd b = test::as_eigen(test::random_vector(g.size(), 3));
  const Eigen::VectorXd x = oracle::dense_solve(A, b);
  EXPECT_LE((A * x - b).norm() / (A.norm() * x.norm() + b.norm()), 1e-12);
}

TEST(Oracle, SizeCap) {
  EXPECT_THROW(oracle::dense_green(make_grid(2, 128), 2.0 * test::kPi2), std::length_error);
}

TEST(Oracle, SvdBlockOfKnownMatrix) {
  Eigen::MatrixXd G = Eigen::MatrixXd::Zero(4, 4);
  G(0, 2) = 3.0;
  G(1, 3) = 0.5;
  const std::vector<std::int64_t> rows = {0, 1}, cols = {2, 3};
  const oracle::SvdBlock s = oracle::dense_svd_block(G, rows, cols);
  EXPECT_NEAR(s.sigma_min, 0.5, 1e-14);
  EXPECT_NEAR(std::abs(s.left(1)), 1.0, 1e-14);
}

TEST(Oracle, NeighbourhoodWraps) {
  const GridSpec g = make_grid(1, 8);
  EXPECT_EQ(oracle::neighbourhood(g, 0, 1), (std::vector<std::int64_t>{7, 0, 1}));
  const auto rest = oracle::complement(g, oracle::neighbourhood(g, 0, 1));
  EXPECT_EQ(rest, (std::vector<std::int64_t>{2, 3, 4, 5, 6}));
}
