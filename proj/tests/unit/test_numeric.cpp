#include <gtest/gtest.h>

#include <array>

#include "../support/fixtures.hpp"
#include "polyhardy/lattice.hpp"
#include "polyhardy/errors.hpp"
#include "polyhardy/numeric.hpp"

namespace nm = polyhardy::numeric;
using oracle::Matrix;

TEST(TensorProduct, IdentityTimesIdentity) {
  const Matrix out = nm::tensor_product(Matrix::Identity(2, 2), Matrix::Identity(3, 3));
  EXPECT_EQ(out, Matrix::Identity(6, 6));
}

TEST(TensorProduct, ScalarFactorScales) {
  oracle::Rng rng(1);
  const Matrix b = rng.matrix(3, 2);
  const Matrix out = nm::tensor_product(Matrix::Constant(1, 1, 2.0), b);
  EXPECT_LE((out - 2.0 * b).norm(), 1e-15);
}

TEST(TensorProduct, MatchesEntrywiseOracle) {
  oracle::Rng rng(2);
  const Matrix a = rng.matrix(3, 2);
  const Matrix b = rng.matrix(2, 4);
  EXPECT_LE((nm::tensor_product(a, b) - oracle::kron(a, b)).norm(), 1e-13);
}

TEST(TensorProduct, NormsMultiplyOnRandomMatrices) {
  oracle::Rng rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix a = rng.matrix(rng.integer(1, 8), rng.integer(1, 8));
    const Matrix b = rng.matrix(rng.integer(1, 8), rng.integer(1, 8));
    const Matrix ab = nm::tensor_product(a, b);
    const double op = oracle::opnorm(a) * oracle::opnorm(b);
    EXPECT_NEAR(nm::spectral_norm(ab), op, 1e-9 * op);
    const double hs = a.norm() * b.norm();
    EXPECT_NEAR(nm::hs_norm(ab), hs, 1e-9 * hs);
  }
}

TEST(TensorProduct, SpanOverloadAndCap) {
  const std::array<Matrix, 3> f{Matrix::Identity(2, 2), Matrix::Identity(3, 3), Matrix::Identity(2, 2)};
  EXPECT_EQ(nm::tensor_product(std::span<const Matrix>(f)).rows(), 12);
  try {
    nm::tensor_product(Matrix::Identity(100, 100), Matrix::Identity(100, 100), 4096);
    FAIL() << "cap not enforced";
  } catch (const polyhardy::SizingError& e) {
    EXPECT_EQ(e.dimension(), 10000u);
  }
}

TEST(Svd, DiagonalValues) {
  Matrix d = Matrix::Zero(2, 2);
  d(0, 0) = 3.0;
  d(1, 1) = 1.0;
  const auto s = nm::svd(d);
  EXPECT_NEAR(s.singular_values(0), 3.0, 1e-15);
  EXPECT_NEAR(s.singular_values(1), 1.0, 1e-15);
}

TEST(Svd, RankOneOuterProduct) {
  oracle::Rng rng(4);
  Matrix u = rng.matrix(5, 1);
  Matrix v = rng.matrix(4, 1);
  u /= u.norm();
  v /= v.norm();
  const auto s = nm::svd(u * v.adjoint());
  EXPECT_NEAR(s.singular_values(0), 1.0, 1e-14);
  for (oracle::Index k = 1; k < s.singular_values.size(); ++k) EXPECT_LE(s.singular_values(k), 1e-14);
}

TEST(Svd, HilbertSchmidtMatchesEntrySum) {
  oracle::Rng rng(5);
  const Matrix m = rng.matrix(5, 5);
  double entries = 0.0;
  for (oracle::Index i = 0; i < 5; ++i) {
    for (oracle::Index j = 0; j < 5; ++j) entries += std::norm(m(i, j));
  }
  EXPECT_NEAR(nm::svd(m).singular_values.squaredNorm(), entries, 1e-10 * entries);
}

TEST(Svd, ReconstructionWithinRelativeBound) {
  oracle::Rng rng(6);
  for (int trial = 0; trial < 10; ++trial) {
    const Matrix a = rng.matrix(rng.integer(1, 30), rng.integer(1, 30));
    const auto s = nm::svd(a);
    const Matrix back = s.u * s.singular_values.cast<nm::Complex>().asDiagonal() * s.v.adjoint();
    EXPECT_LE(oracle::opnorm(a - back), 1e-10 * s.largest());
  }
}

TEST(Svd, RejectsNonFinite) {
  Matrix a = Matrix::Identity(2, 2);
  a(0, 1) = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(nm::svd(a), polyhardy::NumericError);
}

TEST(SpectralNorm, TallAndWideAgreeWithJacobi) {
  oracle::Rng rng(7);
  for (auto [r, c] : std::vector<std::pair<int, int>>{{200, 40}, {40, 200}, {300, 100}, {7, 3}}) {
    const Matrix a = rng.matrix(r, c);
    const double ref = oracle::opnorm(a);
    EXPECT_NEAR(nm::spectral_norm(a), ref, 1e-12 * ref);
  }
  // Tiny norms keep relative accuracy.
  const Matrix small = 1e-13 * rng.matrix(200, 40);
  EXPECT_NEAR(nm::spectral_norm(small), oracle::opnorm(small), 1e-12 * oracle::opnorm(small));
}

TEST(NumericalRank, TrivialCases) {
  EXPECT_EQ(nm::numerical_rank(Matrix(Matrix::Zero(4, 3))), 0);
  EXPECT_EQ(nm::numerical_rank(Matrix(Matrix::Identity(6, 6))), 6);
}

TEST(NumericalRank, RankOnePlusTinyNoise) {
  oracle::Rng rng(8);
  const Matrix u = rng.matrix(6, 1);
  const Matrix v = rng.matrix(6, 1);
  Matrix e = rng.matrix(6, 6);
  e /= oracle::opnorm(e);
  EXPECT_EQ(nm::numerical_rank(Matrix(u * v.adjoint() + 1e-14 * e), 1e-8), 1);
}

TEST(NumericalRank, RejectsBadTolerance) {
  EXPECT_THROW(nm::numerical_rank(Matrix(Matrix::Identity(2, 2)), 0.0), polyhardy::ContractError);
  EXPECT_THROW(nm::numerical_rank(Matrix(Matrix::Identity(2, 2)), 1.0), polyhardy::ContractError);
}

TEST(Orthonormalize, OrthonormalInputUnchangedUpToPhase) {
  oracle::Rng rng(9);
  const Matrix q = oracle::span_basis(rng.matrix(6, 3));
  const Matrix out = nm::orthonormalize(q);
  for (oracle::Index j = 0; j < 3; ++j) {
    const nm::Complex phase = out.col(j).dot(q.col(j));
    EXPECT_NEAR(std::abs(phase), 1.0, 1e-12);
    EXPECT_LE((out.col(j) - phase * q.col(j)).norm(), 1e-12);
  }
}

TEST(Orthonormalize, TwoColumnsGiveIdentityGram) {
  Matrix c = Matrix::Zero(3, 2);
  c(0, 0) = 1.0;
  c(0, 1) = 1.0;
  c(1, 1) = 1.0;
  const Matrix q = nm::orthonormalize(c);
  EXPECT_LE((q.adjoint() * q - Matrix::Identity(2, 2)).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LE(oracle::containment(oracle::span_basis(c), q), 1e-12);
}

TEST(Orthonormalize, SingleColumnKeepsDirection) {
  Matrix c(3, 1);
  c << 2.0, 0.0, 0.0;
  const Matrix q = nm::orthonormalize(c);
  EXPECT_NEAR(q(0, 0).real(), 1.0, 1e-15);
  EXPECT_NEAR(q.norm(), 1.0, 1e-15);
}

TEST(Orthonormalize, DependentColumnsReportRank) {
  Matrix c(3, 2);
  c << 1.0, 2.0, 1.0, 2.0, 0.0, 0.0;
  try {
    nm::orthonormalize(c);
    FAIL();
  } catch (const polyhardy::RankDeficiencyError& e) {
    EXPECT_EQ(e.detected_rank(), 1u);
  }
}

TEST(ProjectorFromBasis, Cases) {
  EXPECT_EQ(nm::projector_from_basis(Matrix(4, 0)), Matrix::Zero(4, 4));
  oracle::Rng rng(10);
  const Matrix full = oracle::span_basis(rng.matrix(5, 5));
  EXPECT_LE((nm::projector_from_basis(full) - Matrix::Identity(5, 5)).norm(), 1e-12);
  Matrix u = rng.matrix(5, 1);
  u /= u.norm();
  const Matrix p = nm::projector_from_basis(u);
  EXPECT_NEAR(p.trace().real(), 1.0, 1e-12);
  EXPECT_LE((p * u - u).norm(), 1e-12);
  EXPECT_THROW(nm::projector_from_basis(2.0 * u), polyhardy::ContractError);
}

TEST(ProjectorFromBasis, IdempotentAndHermitian) {
  oracle::Rng rng(11);
  for (int trial = 0; trial < 10; ++trial) {
    const Matrix b = nm::range_basis(rng.matrix(12, rng.integer(1, 11)));
    const Matrix p = nm::projector_from_basis(b);
    EXPECT_LE(oracle::opnorm(p * p - p), 1e-10);
    EXPECT_LE(oracle::opnorm(p - p.adjoint()), 1e-12);
  }
}

TEST(RangeBasis, TallQrPathMatchesSvdSpan) {
  oracle::Rng rng(12);
  const Matrix low = rng.matrix(300, 20) * rng.matrix(20, 60);
  const Matrix b = nm::range_basis(low, 1e-10);
  EXPECT_EQ(b.cols(), 20);
  EXPECT_LE(nm::orthonormality_defect(b), 1e-12);
  EXPECT_LE(oracle::containment(oracle::span_basis(low), b), 1e-10);
}

TEST(OrthogonalComplement, CompletesBasis) {
  oracle::Rng rng(13);
  const Matrix b = oracle::span_basis(rng.matrix(7, 3));
  const Matrix c = nm::orthogonal_complement(b);
  ASSERT_EQ(c.cols(), 4);
  EXPECT_LE((b.adjoint() * c).norm(), 1e-12);
  EXPECT_LE(nm::orthonormality_defect(c), 1e-12);
}

TEST(SubspaceGap, EqualsProjectorDistance) {
  oracle::Rng rng(14);
  for (int trial = 0; trial < 10; ++trial) {
    const Matrix a = oracle::span_basis(rng.matrix(9, 4));
    const Matrix b = oracle::span_basis(rng.matrix(9, 4));
    EXPECT_NEAR(nm::subspace_gap(a, b), oracle::opnorm(oracle::projector(a) - oracle::projector(b)), 1e-10);
  }
  const Matrix a = oracle::span_basis(rng.matrix(9, 4));
  EXPECT_LE(nm::subspace_gap(a, a), 1e-12);
  EXPECT_EQ(nm::subspace_gap(a, oracle::span_basis(rng.matrix(9, 3))), 1.0);
}

TEST(ContainmentSine, SubspaceOfLarger) {
  oracle::Rng rng(15);
  const Matrix big = oracle::span_basis(rng.matrix(8, 5));
  const Matrix part = oracle::span_basis(big * rng.matrix(5, 2));
  EXPECT_LE(nm::containment_sine(part, big), 1e-12);
  EXPECT_GT(nm::containment_sine(big, part), 0.9);
}

TEST(PermuteTensorRows, MatchesKroneckerSwap) {
  oracle::Rng rng(16);
  const Matrix a = rng.matrix(2, 1);
  const Matrix b = rng.matrix(3, 1);
  const Matrix c = rng.matrix(4, 1);
  const std::vector<nm::Index> dims{2, 3, 4};
  const std::vector<std::size_t> perm{2, 0, 1};
  const Matrix out = nm::permute_tensor_rows(oracle::kron({a, b, c}), dims, perm);
  EXPECT_LE((out - oracle::kron({c, a, b})).norm(), 1e-14);
  EXPECT_EQ(nm::product_of(dims), 24);
}

// A tall, exactly rank-deficient projection block on which divide-and-conquer
// SVD of the triangular factor loses its left singular vectors.
TEST(RangeBasis, RankDeficientTallProjectionBlock) {
  namespace lat = polyhardy::lattice;
  const auto h = fixture::handle({fixture::inner({0.2}), fixture::inner({-0.3}), fixture::inner({0.25})}, {10, 10, 10});
  const Matrix ps = h.projector();
  const Matrix m = lat::coordinate_shift(h.scenario(), 0);
  const Matrix x = (ps - m * ps * m.adjoint()).leftCols(363);
  const Matrix basis = nm::range_basis(x, 1e-8);
  EXPECT_EQ(basis.cols(), oracle::span_basis(x, 1e-8).cols());
  EXPECT_LE(oracle::opnorm(x - basis * (basis.adjoint() * x)), 1e-10);
  const nm::SvdResult s = nm::svd(x);
  const Matrix recon = s.u * s.singular_values.cast<oracle::Complex>().asDiagonal() * s.v.adjoint();
  EXPECT_LE((recon - x).norm(), 1e-10);
}
