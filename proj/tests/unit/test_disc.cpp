#include <gtest/gtest.h>

#include <numbers>

#include "../support/oracles.hpp"
#include "polyhardy/disc.hpp"
#include "polyhardy/errors.hpp"

namespace disc = polyhardy::disc;
namespace nm = polyhardy::numeric;
using oracle::Complex;
using oracle::Index;
using oracle::Matrix;

namespace {

disc::BlaschkeProduct bp(std::vector<Complex> zeros, Complex gamma = 1.0) {
  return disc::BlaschkeProduct(std::move(zeros), gamma);
}

}  // namespace

TEST(Blaschke, EvaluationExamples) {
  EXPECT_EQ(disc::blaschke_eval(bp({}), 0.3), Complex(1.0));
  EXPECT_NEAR(std::abs(disc::blaschke_eval(bp({0.0}), 0.5) - 0.5), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(disc::blaschke_eval(bp({0.5}), 0.0) - Complex(-0.5)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(bp({0.5}).at_zero() - Complex(-0.5)), 0.0, 1e-15);
  EXPECT_THROW(disc::blaschke_eval(bp({0.5}), 1.1), polyhardy::ContractError);
}

TEST(Blaschke, ConstructionContracts) {
  EXPECT_THROW(bp({0.97}), polyhardy::ContractError);
  EXPECT_THROW(bp({0.3}, 2.0), polyhardy::ContractError);
  EXPECT_NO_THROW(disc::BlaschkeProduct({0.97}, 1.0, 0.98));
  EXPECT_THROW(disc::BlaschkeProduct({0.999999999}, 1.0, 1.0), polyhardy::ContractError);
  try {
    bp({0.99});
    FAIL();
  } catch (const polyhardy::ContractError& e) {
    EXPECT_NE(std::string(e.what()).find("modulus bound"), std::string::npos);
  }
  const auto z3 = disc::BlaschkeProduct::power_of_z(3);
  EXPECT_EQ(z3.degree(), 3);
  EXPECT_EQ(z3.max_zero_modulus(), 0.0);
}

TEST(Blaschke, UnimodularOnBoundaryGrid) {
  oracle::Rng rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    const auto b = bp(rng.zeros(rng.integer(0, 5), 0.9), rng.unimodular());
    for (int k = 0; k < 256; ++k) {
      const Complex z = std::polar(1.0, 2.0 * std::numbers::pi * k / 256.0);
      EXPECT_LE(std::abs(std::abs(disc::blaschke_eval(b, z)) - 1.0), 1e-10);
    }
  }
}

TEST(Taylor, Examples) {
  const auto c = disc::taylor_coefficients(disc::BlaschkeProduct::power_of_z(2), 4);
  Eigen::VectorXcd expected = Eigen::VectorXcd::Zero(5);
  expected(2) = 1.0;
  EXPECT_EQ(c, expected);

  const auto h = disc::taylor_coefficients(bp({0.5}), 3);
  const std::array<double, 4> ref{-0.5, 0.75, 0.375, 0.1875};
  for (int k = 0; k < 4; ++k) EXPECT_NEAR(std::abs(h(k) - ref[static_cast<std::size_t>(k)]), 0.0, 1e-15);
  EXPECT_THROW(disc::taylor_coefficients(bp({0.1, 0.2, 0.3}), 2), polyhardy::SizingError);
}

TEST(Taylor, MatchesSampledCoefficients) {
  oracle::Rng rng(32);
  for (int trial = 0; trial < 15; ++trial) {
    const auto zeros = rng.zeros(rng.integer(1, 5), 0.7);
    const Complex gamma = rng.unimodular();
    const auto c = disc::taylor_coefficients(bp(zeros, gamma), 40);
    EXPECT_LE((c - oracle::taylor_by_dft(zeros, gamma, 40)).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(Taylor, PartialSumIsUnimodularAtBoundaryPoint) {
  oracle::Rng rng(33);
  const Complex z = std::polar(1.0, 0.7);
  for (int trial = 0; trial < 15; ++trial) {
    const auto b = bp(rng.zeros(rng.integer(1, 5), 0.6));
    const auto c = disc::taylor_coefficients(b, 60);
    Complex sum = 0.0;
    for (Index k = 60; k >= 0; --k) sum = sum * z + c(k);
    EXPECT_NEAR(std::abs(sum), 1.0, 1e-8);
    EXPECT_NEAR(std::abs(sum - disc::blaschke_eval(b, z)), 0.0, 1e-8);
  }
}

TEST(Multiplication, Examples) {
  EXPECT_EQ(disc::multiplication_operator(disc::BlaschkeProduct::power_of_z(1), 3), oracle::shift(3));
  EXPECT_EQ(disc::truncated_shift(3), oracle::shift(3));
  const Complex gamma = std::polar(1.0, 0.4);
  EXPECT_LE((disc::multiplication_operator(bp({}, gamma), 4) - gamma * Matrix::Identity(5, 5)).norm(), 1e-15);
  const Matrix m = disc::multiplication_operator(bp({0.5}), 40);
  EXPECT_LE(std::abs(m.col(0).norm() - 1.0), std::pow(0.5, 2 * 39) + 1e-15);
  EXPECT_LE((disc::lower_toeplitz(disc::taylor_coefficients(bp({0.5}), 40)) - m).norm(), 1e-15);
}

TEST(ModelSpace, PowersOfZ) {
  const auto q1 = disc::model_space(disc::BlaschkeProduct::power_of_z(1), 10);
  ASSERT_EQ(q1.dimension(), 1);
  EXPECT_NEAR(std::abs(q1.basis(0, 0)), 1.0, 1e-15);
  EXPECT_LE(q1.basis.col(0).tail(10).norm(), 1e-15);
  EXPECT_LE(q1.compressed_shift.norm(), 1e-15);

  const auto q2 = disc::model_space(disc::BlaschkeProduct::power_of_z(2), 10);
  ASSERT_EQ(q2.dimension(), 2);
  EXPECT_LE(oracle::containment(q2.basis, Matrix::Identity(11, 2)), 1e-15);
  // A 2x2 nilpotent Jordan cell up to basis phases.
  const Matrix c = q2.compressed_shift;
  EXPECT_LE((c * c).norm(), 1e-15);
  EXPECT_NEAR(oracle::opnorm(c), 1.0, 1e-15);
  EXPECT_EQ(oracle::rank(c), 1);
}

TEST(ModelSpace, SingleZeroIsNormalizedKernel) {
  const auto q = disc::model_space(bp({0.5}), 40);
  ASSERT_EQ(q.dimension(), 1);
  const Complex phase = q.basis(0, 0) / std::abs(q.basis(0, 0));
  for (Index k = 0; k < 20; ++k) {
    EXPECT_NEAR(std::abs(q.basis(k, 0) / phase - std::sqrt(0.75) * std::pow(0.5, static_cast<double>(k))), 0.0,
                1e-14);
  }
}

TEST(ModelSpace, MatchesSzegoKernelSpan) {
  oracle::Rng rng(34);
  for (int trial = 0; trial < 20; ++trial) {
    auto zeros = rng.zeros(rng.integer(1, 5), 0.7);
    if (trial % 4 == 0) zeros.push_back(zeros.front());  // repeated zero
    const auto q = disc::model_space(bp(zeros), 80);
    const Matrix ref = oracle::model_space_by_kernels(zeros, 80);
    ASSERT_EQ(q.dimension(), static_cast<Index>(zeros.size()));
    EXPECT_LE(nm::subspace_gap(q.basis, ref), 1e-10);
    EXPECT_LE(nm::orthonormality_defect(q.basis), 1e-13);
    EXPECT_LE((q.basis.adjoint() * q.complement).norm(), 1e-13);
    EXPECT_EQ(q.basis.cols() + q.complement.cols(), 81);
  }
}

TEST(ModelSpace, OrthogonalToInteriorMultiples) {
  oracle::Rng rng(35);
  const Index N = 60;
  for (int trial = 0; trial < 10; ++trial) {
    const auto zeros = rng.zeros(rng.integer(1, 4), 0.6);
    const Index deg = static_cast<Index>(zeros.size());
    const auto q = disc::model_space(bp(zeros), N);
    const Index margin = 10;
    const Matrix m = disc::multiplication_operator(bp(zeros), N).leftCols(N - deg - margin);
    double rho = 0.0;
    for (auto a : zeros) rho = std::max(rho, std::abs(a));
    EXPECT_LE(oracle::opnorm(q.basis.adjoint() * m), std::max(1e-13, std::pow(rho, N - deg - margin) * 10.0));
  }
}

TEST(ModelSpace, CompressedShiftContractionAndNilpotency) {
  oracle::Rng rng(36);
  for (int trial = 0; trial < 10; ++trial) {
    const auto q = disc::model_space(bp(rng.zeros(rng.integer(1, 5), 0.7)), 60);
    EXPECT_LE(oracle::opnorm(q.compressed_shift), 1.0 + 1e-10);
  }
  for (Index m = 1; m <= 5; ++m) {
    const auto q = disc::model_space(disc::BlaschkeProduct::power_of_z(m), 30);
    Matrix p = Matrix::Identity(m, m);
    for (Index k = 0; k < m; ++k) p = p * q.compressed_shift;
    EXPECT_LE(oracle::opnorm(p), 1e-12);
  }
}

TEST(ModelSpace, ContractsAndTruncationCheck) {
  EXPECT_THROW(disc::model_space(bp({}), 10), polyhardy::ContractError);
  EXPECT_THROW(disc::model_space(bp({0.1, 0.2}), 1), polyhardy::SizingError);
  try {
    disc::model_space(bp({0.9}), 20);
    FAIL() << "tail 0.9^40 must trip the Gram check";
  } catch (const polyhardy::TruncationError& e) {
    EXPECT_GT(e.gram_deviation(), 1e-6);
  }
  EXPECT_EQ(disc::default_truncation(bp({0.1, 0.2})), 60);
  EXPECT_EQ(disc::default_truncation(disc::BlaschkeProduct::power_of_z(30)), 70);
}

TEST(RankOneCompression, NormAndRank) {
  EXPECT_NEAR(oracle::opnorm(disc::rank_one_compression(disc::BlaschkeProduct::power_of_z(1), 60)), 1.0, 1e-12);
  EXPECT_NEAR(oracle::opnorm(disc::rank_one_compression(bp({0.5}), 60)), std::sqrt(0.75), 1e-8);
  oracle::Rng rng(37);
  for (int trial = 0; trial < 20; ++trial) {
    const auto zeros = rng.zeros(rng.integer(1, 5), 0.7);
    const auto b = bp(zeros, rng.unimodular());
    const Matrix c = disc::rank_one_compression(b, 60);
    EXPECT_EQ(nm::numerical_rank(c, 1e-8), 1);
    EXPECT_NEAR(oracle::opnorm(c), std::sqrt(1.0 - std::norm(oracle::blaschke(zeros, b.constant(), 0.0))), 1e-6);
  }
}

TEST(RankOneCompression, ActionIsInnerProductWithTheta) {
  // C f = <f, b> M_z^* b for f in b H^2, in ambient coordinates.
  oracle::Rng rng(38);
  const Index N = 60;
  for (int trial = 0; trial < 5; ++trial) {
    const auto zeros = rng.zeros(rng.integer(1, 4), 0.6);
    const auto b = bp(zeros);
    const auto q = disc::model_space(b, N);
    const Matrix c = disc::rank_one_compression(q);
    const Eigen::VectorXcd theta = oracle::taylor_by_dft(zeros, 1.0, N);
    const Eigen::VectorXcd back = oracle::shift(N).adjoint() * theta;
    const Eigen::VectorXcd f = q.complement * rng.matrix(q.complement.cols(), 1);
    const Eigen::VectorXcd lhs = q.basis * (c * (q.complement.adjoint() * f));
    const Eigen::VectorXcd rhs = theta.dot(f) * back;
    EXPECT_LE((lhs - rhs).norm(), 1e-8 * f.norm());
  }
}

TEST(EvaluateOnMatrix, AnnihilatesCompressedShift) {
  const auto z = disc::BlaschkeProduct::power_of_z(1);
  EXPECT_LE(disc::evaluate_on_matrix(z, disc::model_space(z, 10).compressed_shift).norm(), 1e-15);
  const auto z2 = disc::BlaschkeProduct::power_of_z(2);
  EXPECT_LE(oracle::opnorm(disc::evaluate_on_matrix(z2, disc::model_space(z2, 10).compressed_shift)), 1e-15);
  const auto b = bp({0.5, -0.3});
  EXPECT_LE(oracle::opnorm(disc::evaluate_on_matrix(b, disc::model_space(b, 60).compressed_shift)), 1e-10);
  // 1 - conj(a) C singular when C has eigenvalue 1/conj(a) = 2.
  Matrix c = Matrix::Identity(1, 1) * 2.0;
  EXPECT_THROW(disc::evaluate_on_matrix(bp({0.5}), c), polyhardy::NumericError);
}
