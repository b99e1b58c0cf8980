#pragma once
//
// Dense complex linear algebra used by every other module.
//
// Basis convention for tensor products: the Kronecker product A (x) B indexes
// rows as (row_A * rows_B + row_B), i.e. multi-indices are lexicographic with
// the first factor (variable 1) varying slowest.
//

#include <complex>
#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace polyhardy::numeric {

using Index = Eigen::Index;
using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

inline constexpr Index kDefaultMatrixCap = 4096;
inline constexpr double kDefaultRankTol = 1e-8;
inline constexpr double kOrthonormalizeTol = 1e-10;
inline constexpr double kProjectorTol = 1e-10;
// From this smaller dimension on, spectral norms use the Gram eigenproblem and
// tall range bases a QR preconditioning step.
inline constexpr Index kGramNormMinDim = 32;

struct SvdResult {
  RealVector singular_values;  // non-increasing
  ComplexMatrix u;             // rows x k
  ComplexMatrix v;             // cols x k

  double largest() const { return singular_values.size() ? singular_values(0) : 0.0; }
};

// Throws NumericError naming `what` if any entry is NaN or infinite.
void require_finite(const ComplexMatrix& a, std::string_view what);

// Throws SizingError when rows or cols exceed `cap`.
void require_within_cap(Index rows, Index cols, Index cap, std::string_view what);

ComplexMatrix tensor_product(const ComplexMatrix& a, const ComplexMatrix& b,
                             Index cap = kDefaultMatrixCap);
ComplexMatrix tensor_product(std::span<const ComplexMatrix> factors,
                             Index cap = kDefaultMatrixCap);

// Thin SVD. Reconstruction error is at most 1e-10 * sigma_max.
SvdResult svd(const ComplexMatrix& a);
RealVector singular_values(const ComplexMatrix& a);

double spectral_norm(const ComplexMatrix& a);
double hs_norm(const ComplexMatrix& a);

// Count of singular values strictly above rel_tol * sigma_max; 0 for the zero matrix.
Index numerical_rank(const RealVector& singular_values, double rel_tol = kDefaultRankTol);
Index numerical_rank(const ComplexMatrix& a, double rel_tol = kDefaultRankTol);

// Orthonormal basis of the column span, column order preserved (Householder QR).
// Throws RankDeficiencyError if the columns are dependent at rel_tol.
ComplexMatrix orthonormalize(const ComplexMatrix& columns, double rel_tol = kOrthonormalizeTol);

// Orthonormal basis of the column space, tolerant of rank deficiency.
ComplexMatrix range_basis(const ComplexMatrix& a, double rel_tol = kDefaultRankTol);

// Orthonormal basis of the orthogonal complement of span(orthonormal_columns).
ComplexMatrix orthogonal_complement(const ComplexMatrix& orthonormal_columns);

// P = B B^*; the zero matrix for an empty basis. Throws ContractError if B is
// not orthonormal to 1e-10.
ComplexMatrix projector_from_basis(const ComplexMatrix& orthonormal_columns);

// max(|B^*B - I|) entrywise; 0 for an empty basis.
double orthonormality_defect(const ComplexMatrix& columns);

// Largest sine of the principal angles between two subspaces given by
// orthonormal bases; equals ||P_A - P_B||. 1 when the dimensions differ.
double subspace_gap(const ComplexMatrix& basis_a, const ComplexMatrix& basis_b);

// Sine of the largest angle from span(basis_a) to span(basis_b):
// ||(I - P_B) A||. Zero iff span(A) is contained in span(B).
double containment_sine(const ComplexMatrix& basis_a, const ComplexMatrix& basis_b);

// Reorders the tensor axes of each column. Rows of `x` are indexed by the
// multi-index over `dims` (axis 0 slowest). Output axis p is input axis perm[p].
ComplexMatrix permute_tensor_rows(const ComplexMatrix& x, std::span<const Index> dims,
                                  std::span<const std::size_t> perm);

Index product_of(std::span<const Index> dims);

}  // namespace polyhardy::numeric
