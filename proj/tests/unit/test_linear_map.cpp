#include <gtest/gtest.h>

#include "../support/oracles.hpp"
#include "polyhardy/errors.hpp"
#include "polyhardy/linear_map.hpp"

namespace nm = polyhardy::numeric;
using oracle::Matrix;

TEST(LinearMap, DenseRoundTripAndAdjoint) {
  oracle::Rng rng(21);
  const Matrix a = rng.matrix(5, 3);
  const auto m = nm::LinearMap::from_dense(a);
  EXPECT_EQ(m.rows(), 5);
  EXPECT_EQ(m.cols(), 3);
  EXPECT_LE((m.to_dense() - a).norm(), 1e-14);
  EXPECT_LE((m.adjoint().to_dense() - a.adjoint()).norm(), 1e-14);
  const Matrix x = rng.matrix(5, 2);
  EXPECT_LE((m.apply_adjoint(x) - a.adjoint() * x).norm(), 1e-13);
}

TEST(LinearMap, AlgebraMatchesDense) {
  oracle::Rng rng(22);
  const Matrix a = rng.matrix(4, 4);
  const Matrix b = rng.matrix(4, 4);
  const auto ma = nm::LinearMap::from_dense(a);
  const auto mb = nm::LinearMap::from_dense(b);
  EXPECT_LE(((ma * mb).to_dense() - a * b).norm(), 1e-12);
  EXPECT_LE(((ma + mb).to_dense() - (a + b)).norm(), 1e-13);
  EXPECT_LE(((ma - mb).to_dense() - (a - b)).norm(), 1e-13);
  const nm::Complex alpha(0.3, -2.0);
  EXPECT_LE(((alpha * ma).to_dense() - alpha * a).norm(), 1e-13);
  EXPECT_LE(((alpha * ma * mb).adjoint().to_dense() - (alpha * a * b).adjoint()).norm(), 1e-12);
  EXPECT_EQ(nm::LinearMap::identity(3).to_dense(), Matrix::Identity(3, 3));
  EXPECT_EQ(nm::LinearMap::zero(2, 3).to_dense(), Matrix::Zero(2, 3));
}

TEST(LinearMap, ShapeMismatchIsAContractError) {
  const auto a = nm::LinearMap::identity(3);
  const auto b = nm::LinearMap::identity(4);
  EXPECT_THROW(a * b, polyhardy::ContractError);
  EXPECT_THROW(a + b, polyhardy::ContractError);
  EXPECT_THROW(a.apply(Matrix::Zero(4, 1)), polyhardy::ContractError);
}

TEST(LinearMap, CoordinateInjection) {
  const auto j = nm::LinearMap::coordinate_injection(5, {1, 3});
  Matrix expected = Matrix::Zero(5, 2);
  expected(1, 0) = 1.0;
  expected(3, 1) = 1.0;
  EXPECT_EQ(j.to_dense(), expected);
  EXPECT_EQ(j.adjoint().to_dense(), expected.adjoint());
}

TEST(LinearMap, DenseCapRaisesSizingError) {
  EXPECT_THROW(nm::LinearMap::identity(5000).to_dense(4096), polyhardy::SizingError);
}

TEST(Kronecker, ApplyMatchesEntrywiseProduct) {
  oracle::Rng rng(23);
  const Matrix a = rng.matrix(3, 2);
  const Matrix c = rng.matrix(2, 4);
  const std::vector<nm::KroneckerFactor> f{nm::KroneckerFactor::dense(a), nm::KroneckerFactor::identity(3),
                                           nm::KroneckerFactor::dense(c)};
  const Matrix ref = oracle::kron({a, Matrix::Identity(3, 3), c});
  const Matrix x = rng.matrix(ref.cols(), 3);
  EXPECT_LE((nm::kronecker_apply(f, x) - ref * x).norm(), 1e-12);
  EXPECT_LE((nm::kronecker_dense(f) - ref).norm(), 1e-12);
  const auto map = nm::kronecker_map(f);
  const Matrix y = rng.matrix(ref.rows(), 2);
  EXPECT_LE((map.apply_adjoint(y) - ref.adjoint() * y).norm(), 1e-12);
}

TEST(LowRankSvd, RecoversLowRankOperator) {
  oracle::Rng rng(24);
  const Matrix a = rng.matrix(300, 5) * rng.matrix(5, 200);
  const auto lr = nm::low_rank_svd(nm::LinearMap::from_dense(a));
  const Eigen::VectorXd ref = oracle::singular_values(a);
  ASSERT_GE(lr.svd.singular_values.size(), 5);
  for (int k = 0; k < 5; ++k) EXPECT_NEAR(lr.svd.singular_values(k), ref(k), 1e-9 * ref(0));
  EXPECT_EQ(nm::numerical_rank(lr.svd.singular_values), 5);
  EXPECT_LE(lr.residual_bound, 1e-8 * ref(0));
  EXPECT_GE(lr.norm_bound(), ref(0));
}

TEST(LowRankSvd, DeterministicForFixedSeed) {
  oracle::Rng rng(25);
  const auto op = nm::LinearMap::from_dense(rng.matrix(120, 3) * rng.matrix(3, 90));
  const auto a = nm::low_rank_svd(op);
  const auto b = nm::low_rank_svd(op);
  EXPECT_EQ(a.svd.singular_values, b.svd.singular_values);
  EXPECT_EQ(a.residual_bound, b.residual_bound);
}

TEST(LowRankSvd, ZeroOperator) {
  const auto lr = nm::low_rank_svd(nm::LinearMap::zero(50, 40));
  EXPECT_LE(lr.svd.largest(), 1e-300);
  EXPECT_EQ(nm::numerical_rank(lr.svd.singular_values), 0);
}

TEST(LowRankSvd, FullRankFallsBackToDense) {
  oracle::Rng rng(26);
  const Matrix a = rng.matrix(40, 40);
  const auto lr = nm::low_rank_svd(nm::LinearMap::from_dense(a));
  EXPECT_NEAR(lr.svd.largest(), oracle::opnorm(a), 1e-10 * oracle::opnorm(a));
  EXPECT_EQ(nm::numerical_rank(lr.svd.singular_values), 40);
}
