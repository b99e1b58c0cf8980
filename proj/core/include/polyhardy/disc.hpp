#pragma once
//
// One-variable layer: finite Blaschke products, truncated operators on
// H^2(D) in the monomial basis 1, z, ..., z^N, and model spaces
// Q_b = H^2 (-) b H^2 with orthonormal Takenaka-Malmquist bases.
//

#include <vector>

#include "polyhardy/numeric.hpp"

namespace polyhardy::disc {

using numeric::Complex;
using numeric::ComplexMatrix;
using numeric::ComplexVector;
using numeric::Index;

inline constexpr double kZeroMargin = 1e-8;         // |a| <= 1 - margin always
inline constexpr double kDefaultMaxModulus = 0.95;  // configurable rejection bound
inline constexpr double kConstantTol = 1e-12;
inline constexpr double kGramTol = 1e-6;  // model-space truncation check

// gamma * prod_k (z - a_k) / (1 - conj(a_k) z); zeros listed with multiplicity.
class BlaschkeProduct {
 public:
  BlaschkeProduct() = default;
  explicit BlaschkeProduct(std::vector<Complex> zeros, Complex constant = 1.0,
                           double max_modulus = kDefaultMaxModulus);

  // z^m.
  static BlaschkeProduct power_of_z(Index m);

  const std::vector<Complex>& zeros() const noexcept { return zeros_; }
  Complex constant() const noexcept { return constant_; }
  Index degree() const noexcept { return static_cast<Index>(zeros_.size()); }
  // max |a_k|, 0 for degree 0.
  double max_zero_modulus() const noexcept;

  Complex eval(Complex z) const;
  Complex at_zero() const;

 private:
  std::vector<Complex> zeros_;
  Complex constant_{1.0, 0.0};
};

// Pre: |z| <= 1. Throws ContractError otherwise.
Complex blaschke_eval(const BlaschkeProduct& b, Complex z);

// First N+1 Taylor coefficients at 0. Throws SizingError if N < degree.
ComplexVector taylor_coefficients(const BlaschkeProduct& b, Index N);

// Lower-triangular Toeplitz matrix T(i, j) = c_{i-j}.
ComplexMatrix lower_toeplitz(const ComplexVector& coefficients);

// Truncated M_b on span{1, ..., z^N}.
ComplexMatrix multiplication_operator(const BlaschkeProduct& b, Index N);

// Truncated M_z: z^k -> z^{k+1}, z^N -> 0.
ComplexMatrix truncated_shift(Index N);

// max(60, degree + 40).
Index default_truncation(const BlaschkeProduct& b);

struct ModelSpace1D {
  BlaschkeProduct source;
  Index truncation = 0;
  ComplexMatrix basis;            // (N+1) x m, orthonormal
  ComplexMatrix complement;       // (N+1) x (N+1-m), truncated b H^2
  ComplexMatrix compressed_shift;  // m x m, V^* S V
  double gram_deviation = 0.0;    // of the raw truncated Takenaka-Malmquist columns

  Index dimension() const noexcept { return basis.cols(); }
  Index ambient_dimension() const noexcept { return truncation + 1; }
};

// Raw truncated Takenaka-Malmquist columns, not re-orthonormalized.
ComplexMatrix takenaka_malmquist_columns(const BlaschkeProduct& b, Index N);

// Pre: degree >= 1. Throws TruncationError when the raw Gram deviation
// exceeds gram_tol, SizingError when N < degree.
ModelSpace1D model_space(const BlaschkeProduct& b, Index N, double gram_tol = kGramTol);

// C_b = P_Q M_z^* restricted to b H^2, as an m x (N+1-m) matrix from the
// complement basis into the model-space basis.
ComplexMatrix rank_one_compression(const ModelSpace1D& q);
ComplexMatrix rank_one_compression(const BlaschkeProduct& b, Index N);

// b(C) = gamma * prod_k (C - a_k I)(I - conj(a_k) C)^{-1}. Throws NumericError
// when a factor is numerically singular.
ComplexMatrix evaluate_on_matrix(const BlaschkeProduct& b, const ComplexMatrix& c);

}  // namespace polyhardy::disc
