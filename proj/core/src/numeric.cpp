#include "polyhardy/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include "polyhardy/errors.hpp"

namespace polyhardy::numeric {

void require_finite(const ComplexMatrix& a, std::string_view what) {
  if (!a.allFinite()) {
    throw NumericError(std::string(what) + ": matrix contains NaN or Inf entries");
  }
}

void require_within_cap(Index rows, Index cols, Index cap, std::string_view what) {
  if (rows > cap || cols > cap) {
    std::ostringstream msg;
    msg << what << ": dimension " << rows << "x" << cols << " exceeds matrix cap " << cap;
    throw SizingError(msg.str(), static_cast<std::size_t>(std::max(rows, cols)));
  }
}

Index product_of(std::span<const Index> dims) {
  Index total = 1;
  for (Index d : dims) {
    if (d != 0 && total > std::numeric_limits<Index>::max() / d) {
      throw SizingError("tensor dimension overflow", std::numeric_limits<std::size_t>::max());
    }
    total *= d;
  }
  return total;
}

ComplexMatrix tensor_product(const ComplexMatrix& a, const ComplexMatrix& b, Index cap) {
  const Index rows = a.rows() * b.rows();
  const Index cols = a.cols() * b.cols();
  require_within_cap(rows, cols, cap, "tensor_product");
  ComplexMatrix out(rows, cols);
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

ComplexMatrix tensor_product(std::span<const ComplexMatrix> factors, Index cap) {
  ComplexMatrix out = ComplexMatrix::Identity(1, 1);
  for (const auto& f : factors) out = tensor_product(out, f, cap);
  return out;
}

namespace {

constexpr double kSvdDefectTol = 1e-11;

// max(||A V - U S|| / max(1, sigma_max), ||U^* U - I||), both Frobenius.
double svd_defect(const ComplexMatrix& a, const SvdResult& s) {
  const double scale = std::max(1.0, s.singular_values.size() ? s.singular_values(0) : 0.0);
  const ComplexMatrix residual = a * s.v - s.u * s.singular_values.cast<Complex>().asDiagonal();
  const ComplexMatrix gram = s.u.adjoint() * s.u - ComplexMatrix::Identity(s.u.cols(), s.u.cols());
  return std::max(residual.norm() / scale, gram.norm()) / std::sqrt(static_cast<double>(s.u.cols()));
}

}  // namespace

SvdResult svd(const ComplexMatrix& a) {
  require_finite(a, "svd");
  SvdResult result;
  if (a.rows() == 0 || a.cols() == 0) {
    result.singular_values.resize(0);
    result.u.resize(a.rows(), 0);
    result.v.resize(a.cols(), 0);
    return result;
  }
  Eigen::BDCSVD<ComplexMatrix> solver(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (solver.info() == Eigen::Success) {
    result.singular_values = solver.singularValues();
    result.u = solver.matrixU();
    result.v = solver.matrixV();
    if (svd_defect(a, result) <= kSvdDefectTol) return result;
  }
  // Divide and conquer occasionally loses accuracy on strongly rank-deficient input.
  Eigen::JacobiSVD<ComplexMatrix> jacobi(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  result.singular_values = jacobi.singularValues();
  result.u = jacobi.matrixU();
  result.v = jacobi.matrixV();
  if (svd_defect(a, result) > kSvdDefectTol) throw NumericError("svd: decomposition did not converge");
  return result;
}

RealVector singular_values(const ComplexMatrix& a) {
  require_finite(a, "singular_values");
  if (a.rows() == 0 || a.cols() == 0) return RealVector(0);
  // Values alone cannot be verified, so go through the checked full decomposition.
  return svd(a).singular_values;
}

double spectral_norm(const ComplexMatrix& a) {
  const Index lo = std::min(a.rows(), a.cols());
  if (lo >= kGramNormMinDim) {
    // Largest eigenvalue of the small Gram matrix keeps full relative accuracy for sigma_max.
    require_finite(a, "spectral_norm");
    const ComplexMatrix gram = a.rows() >= a.cols() ? ComplexMatrix(a.adjoint() * a) : ComplexMatrix(a * a.adjoint());
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(gram, Eigen::EigenvaluesOnly);
    if (eig.info() != Eigen::Success) throw NumericError("spectral_norm: eigenvalue solver failed");
    return std::sqrt(std::max(0.0, eig.eigenvalues()(lo - 1)));
  }
  const RealVector s = singular_values(a);
  return s.size() ? s(0) : 0.0;
}

double hs_norm(const ComplexMatrix& a) { return a.norm(); }

Index numerical_rank(const RealVector& sv, double rel_tol) {
  if (!(rel_tol > 0.0 && rel_tol < 1.0)) {
    throw ContractError("numerical_rank: rel_tol must lie in (0, 1)");
  }
  if (sv.size() == 0 || sv(0) == 0.0) return 0;
  const double cut = rel_tol * sv(0);
  Index r = 0;
  for (Index k = 0; k < sv.size(); ++k) {
    if (sv(k) > cut) ++r;
  }
  return r;
}

Index numerical_rank(const ComplexMatrix& a, double rel_tol) {
  return numerical_rank(singular_values(a), rel_tol);
}

ComplexMatrix orthonormalize(const ComplexMatrix& columns, double rel_tol) {
  require_finite(columns, "orthonormalize");
  const Index k = columns.cols();
  if (k == 0) return ComplexMatrix(columns.rows(), 0);
  if (k > columns.rows()) {
    throw RankDeficiencyError("orthonormalize: more columns than rows",
                              static_cast<std::size_t>(columns.rows()));
  }
  Eigen::HouseholderQR<ComplexMatrix> qr(columns);
  const ComplexMatrix r = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
  const RealVector sv = singular_values(r);
  const Index rank = sv(0) == 0.0 ? 0 : numerical_rank(sv, rel_tol);
  if (rank < k) {
    std::ostringstream msg;
    msg << "orthonormalize: columns are linearly dependent (detected rank " << rank << " of "
        << k << ")";
    throw RankDeficiencyError(msg.str(), static_cast<std::size_t>(rank));
  }
  ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(columns.rows(), k);
  // Fix the phase so that an already orthonormal input comes back unchanged.
  for (Index j = 0; j < k; ++j) {
    const Complex d = qr.matrixQR()(j, j);
    if (std::abs(d) > 0.0) q.col(j) *= d / std::abs(d);
  }
  return q;
}

ComplexMatrix range_basis(const ComplexMatrix& a, double rel_tol) {
  if (a.cols() == 0 || a.rows() == 0) return ComplexMatrix(a.rows(), 0);
  if (a.rows() >= 2 * a.cols() && a.cols() >= kGramNormMinDim) {
    // Thin QR first, then the SVD of the square triangular factor.
    require_finite(a, "range_basis");
    const Index k = a.cols();
    Eigen::HouseholderQR<ComplexMatrix> qr(a);
    const ComplexMatrix r_factor = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
    const SvdResult s = svd(r_factor);
    const Index r = numerical_rank(s.singular_values, rel_tol);
    ComplexMatrix u = ComplexMatrix::Zero(a.rows(), r);
    u.topRows(k) = s.u.leftCols(r);
    u.applyOnTheLeft(qr.householderQ());
    return u;
  }
  const SvdResult s = svd(a);
  const Index r = numerical_rank(s.singular_values, rel_tol);
  return s.u.leftCols(r);
}

ComplexMatrix orthogonal_complement(const ComplexMatrix& basis) {
  const Index n = basis.rows();
  const Index k = basis.cols();
  if (k == 0) return ComplexMatrix::Identity(n, n);
  if (k == n) return ComplexMatrix(n, 0);
  Eigen::HouseholderQR<ComplexMatrix> qr(basis);
  const ComplexMatrix full = qr.householderQ();
  return full.rightCols(n - k);
}

double orthonormality_defect(const ComplexMatrix& columns) {
  if (columns.cols() == 0) return 0.0;
  const ComplexMatrix gram = columns.adjoint() * columns;
  return (gram - ComplexMatrix::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff();
}

ComplexMatrix projector_from_basis(const ComplexMatrix& basis) {
  const double defect = orthonormality_defect(basis);
  if (defect > kProjectorTol) {
    std::ostringstream msg;
    msg << "projector_from_basis: columns are not orthonormal (Gram defect " << defect << ")";
    throw ContractError(msg.str());
  }
  if (basis.cols() == 0) return ComplexMatrix::Zero(basis.rows(), basis.rows());
  ComplexMatrix p = basis * basis.adjoint();
  // Symmetrize away rounding so P == P^* to the last bit.
  return (0.5 * (p + p.adjoint())).eval();
}

double containment_sine(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() == 0) return 0.0;
  if (b.cols() == 0) return 1.0;
  const ComplexMatrix residual = a - b * (b.adjoint() * a);
  return std::min(1.0, spectral_norm(residual));
}

double subspace_gap(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows()) throw ContractError("subspace_gap: ambient dimensions differ");
  if (a.cols() != b.cols()) return 1.0;
  return std::max(containment_sine(a, b), containment_sine(b, a));
}

ComplexMatrix permute_tensor_rows(const ComplexMatrix& x, std::span<const Index> dims,
                                  std::span<const std::size_t> perm) {
  const std::size_t n = dims.size();
  if (perm.size() != n) throw ContractError("permute_tensor_rows: permutation size mismatch");
  if (product_of(dims) != x.rows()) {
    throw ContractError("permute_tensor_rows: row count does not match tensor dimensions");
  }
  std::vector<Index> out_dims(n);
  for (std::size_t p = 0; p < n; ++p) out_dims[p] = dims[perm[p]];

  // Strides of the input layout.
  std::vector<Index> in_stride(n, 1);
  for (std::size_t a = n; a-- > 1;) in_stride[a - 1] = in_stride[a] * dims[a];

  ComplexMatrix out(x.rows(), x.cols());
  std::vector<Index> idx(n, 0);  // multi-index over out_dims
  for (Index row = 0; row < x.rows(); ++row) {
    Index src = 0;
    for (std::size_t p = 0; p < n; ++p) src += idx[p] * in_stride[perm[p]];
    out.row(row) = x.row(src);
    for (std::size_t p = n; p-- > 0;) {
      if (++idx[p] < out_dims[p]) break;
      idx[p] = 0;
    }
  }
  return out;
}

}  // namespace polyhardy::numeric
