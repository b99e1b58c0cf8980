#include "polyhardy/disc.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <utility>

#include "polyhardy/errors.hpp"

namespace polyhardy::disc {

BlaschkeProduct::BlaschkeProduct(std::vector<Complex> zeros, Complex constant, double max_modulus)
    : zeros_(std::move(zeros)), constant_(constant) {
  if (!(max_modulus > 0.0 && max_modulus <= 1.0 - kZeroMargin)) {
    throw ContractError("BlaschkeProduct: max_modulus must lie in (0, 1 - 1e-8]");
  }
  if (!std::isfinite(constant.real()) || !std::isfinite(constant.imag()) ||
      std::abs(std::abs(constant) - 1.0) > kConstantTol) {
    std::ostringstream msg;
    msg << "BlaschkeProduct: constant must be unimodular within " << kConstantTol << " (|c| = "
        << std::abs(constant) << ")";
    throw ContractError(msg.str());
  }
  for (const Complex& a : zeros_) {
    if (!std::isfinite(a.real()) || !std::isfinite(a.imag())) {
      throw ContractError("BlaschkeProduct: zero is not finite");
    }
    if (std::abs(a) > max_modulus) {
      std::ostringstream msg;
      msg << "BlaschkeProduct: zero " << a.real() << (a.imag() < 0 ? "" : "+") << a.imag()
          << "i has modulus " << std::abs(a) << " above the modulus bound " << max_modulus;
      throw ContractError(msg.str());
    }
  }
}

BlaschkeProduct BlaschkeProduct::power_of_z(Index m) {
  if (m < 0) throw ContractError("power_of_z: negative degree");
  return BlaschkeProduct(std::vector<Complex>(static_cast<std::size_t>(m), Complex(0.0)));
}

double BlaschkeProduct::max_zero_modulus() const noexcept {
  double rho = 0.0;
  for (const Complex& a : zeros_) rho = std::max(rho, std::abs(a));
  return rho;
}

Complex BlaschkeProduct::eval(Complex z) const {
  Complex value = constant_;
  for (const Complex& a : zeros_) value *= (z - a) / (1.0 - std::conj(a) * z);
  return value;
}

Complex BlaschkeProduct::at_zero() const { return eval(Complex(0.0)); }

Complex blaschke_eval(const BlaschkeProduct& b, Complex z) {
  if (std::abs(z) > 1.0 + 1e-12) throw ContractError("blaschke_eval: |z| must be at most 1");
  return b.eval(z);
}

namespace {

// c <- c * (z - a) / (1 - conj(a) z), truncated to the same length.
void multiply_by_factor(ComplexVector& c, Complex a) {
  const Index len = c.size();
  ComplexVector d(len);
  for (Index k = len; k-- > 0;) d(k) = (k > 0 ? c(k - 1) : Complex(0.0)) - a * c(k);
  const Complex abar = std::conj(a);
  for (Index k = 1; k < len; ++k) d(k) += abar * d(k - 1);
  c = std::move(d);
}

// c <- c / (1 - conj(a) z).
void divide_by_denominator(ComplexVector& c, Complex a) {
  const Complex abar = std::conj(a);
  for (Index k = 1; k < c.size(); ++k) c(k) += abar * c(k - 1);
}

void require_truncation(const BlaschkeProduct& b, Index N, const char* what) {
  if (N < b.degree()) {
    std::ostringstream msg;
    msg << what << ": truncation N = " << N << " is below the degree " << b.degree();
    throw SizingError(msg.str(), static_cast<std::size_t>(N < 0 ? 0 : N));
  }
}

}  // namespace

ComplexVector taylor_coefficients(const BlaschkeProduct& b, Index N) {
  require_truncation(b, N, "taylor_coefficients");
  ComplexVector c = ComplexVector::Zero(N + 1);
  c(0) = b.constant();
  for (const Complex& a : b.zeros()) multiply_by_factor(c, a);
  return c;
}

ComplexMatrix lower_toeplitz(const ComplexVector& c) {
  const Index n = c.size();
  ComplexMatrix t = ComplexMatrix::Zero(n, n);
  for (Index j = 0; j < n; ++j) t.col(j).tail(n - j) = c.head(n - j);
  return t;
}

ComplexMatrix multiplication_operator(const BlaschkeProduct& b, Index N) {
  return lower_toeplitz(taylor_coefficients(b, N));
}

ComplexMatrix truncated_shift(Index N) {
  if (N < 0) throw ContractError("truncated_shift: negative truncation");
  ComplexMatrix s = ComplexMatrix::Zero(N + 1, N + 1);
  for (Index k = 0; k < N; ++k) s(k + 1, k) = 1.0;
  return s;
}

Index default_truncation(const BlaschkeProduct& b) { return std::max<Index>(60, b.degree() + 40); }

ComplexMatrix takenaka_malmquist_columns(const BlaschkeProduct& b, Index N) {
  require_truncation(b, N, "takenaka_malmquist_columns");
  const Index m = b.degree();
  ComplexMatrix cols(N + 1, m);
  ComplexVector prefix = ComplexVector::Zero(N + 1);
  prefix(0) = 1.0;
  for (Index k = 0; k < m; ++k) {
    const Complex a = b.zeros()[static_cast<std::size_t>(k)];
    ComplexVector e = prefix;
    divide_by_denominator(e, a);
    cols.col(k) = std::sqrt(1.0 - std::norm(a)) * e;
    multiply_by_factor(prefix, a);
  }
  return cols;
}

ModelSpace1D model_space(const BlaschkeProduct& b, Index N, double gram_tol) {
  if (b.degree() < 1) throw ContractError("model_space: degree must be at least 1");
  const ComplexMatrix raw = takenaka_malmquist_columns(b, N);
  const double deviation = numeric::orthonormality_defect(raw);
  if (deviation > gram_tol) {
    std::ostringstream msg;
    msg << "model_space: truncation N = " << N << " too small for degree " << b.degree()
        << " with max zero modulus " << b.max_zero_modulus() << " (Gram deviation " << deviation
        << " > " << gram_tol << "); increase N";
    throw TruncationError(msg.str(), deviation);
  }
  ModelSpace1D q;
  q.source = b;
  q.truncation = N;
  q.gram_deviation = deviation;
  q.basis = numeric::orthonormalize(raw);
  q.complement = numeric::orthogonal_complement(q.basis);
  q.compressed_shift = q.basis.adjoint() * truncated_shift(N) * q.basis;
  return q;
}

ComplexMatrix rank_one_compression(const ModelSpace1D& q) {
  // S^* applied to the complement, then projected onto the model space.
  const Index n = q.ambient_dimension();
  ComplexMatrix shifted = ComplexMatrix::Zero(n, q.complement.cols());
  shifted.topRows(n - 1) = q.complement.bottomRows(n - 1);
  return q.basis.adjoint() * shifted;
}

ComplexMatrix rank_one_compression(const BlaschkeProduct& b, Index N) {
  return rank_one_compression(model_space(b, N));
}

ComplexMatrix evaluate_on_matrix(const BlaschkeProduct& b, const ComplexMatrix& c) {
  if (c.rows() != c.cols()) throw ContractError("evaluate_on_matrix: matrix must be square");
  numeric::require_finite(c, "evaluate_on_matrix");
  const Index m = c.rows();
  const ComplexMatrix id = ComplexMatrix::Identity(m, m);
  ComplexMatrix value = b.constant() * id;
  for (const Complex& a : b.zeros()) {
    const ComplexMatrix denom = id - std::conj(a) * c;
    Eigen::PartialPivLU<ComplexMatrix> lu(denom);
    const double rcond = m == 0 ? 1.0 : lu.rcond();
    if (!(rcond > 1e-12)) {
      std::ostringstream msg;
      msg << "evaluate_on_matrix: I - conj(a) C is numerically singular (rcond " << rcond << ")";
      throw NumericError(msg.str());
    }
    // The factors commute with C, so the solve order is immaterial.
    value = value * lu.solve(c - a * id);
  }
  return value;
}

}  // namespace polyhardy::disc
