#pragma once
//
// Matrix-free operators. Ambient polydisc spaces grow as a product of
// per-variable dimensions, so operators on them are composed from Kronecker
// factors and applied to blocks of vectors instead of being materialized.
//

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "polyhardy/numeric.hpp"

namespace polyhardy::numeric {

class LinearMap {
 public:
  using Action = std::function<ComplexMatrix(const ComplexMatrix&)>;

  LinearMap(Index rows, Index cols, Action forward, Action adjoint);

  static LinearMap identity(Index n);
  static LinearMap zero(Index rows, Index cols);
  static LinearMap from_dense(ComplexMatrix m);
  // Injection of the coordinate vectors listed in `coordinates` into C^ambient.
  static LinearMap coordinate_injection(Index ambient, std::vector<Index> coordinates);

  Index rows() const noexcept { return rows_; }
  Index cols() const noexcept { return cols_; }

  ComplexMatrix apply(const ComplexMatrix& x) const;
  ComplexMatrix apply_adjoint(const ComplexMatrix& y) const;
  LinearMap adjoint() const;

  // Applies the map to the identity. Throws SizingError beyond `cap`.
  ComplexMatrix to_dense(Index cap = kDefaultMatrixCap) const;

 private:
  Index rows_;
  Index cols_;
  std::shared_ptr<const Action> forward_;
  std::shared_ptr<const Action> adjoint_;
};

LinearMap operator*(const LinearMap& a, const LinearMap& b);  // composition a∘b
LinearMap operator+(const LinearMap& a, const LinearMap& b);
LinearMap operator-(const LinearMap& a, const LinearMap& b);
LinearMap operator*(Complex alpha, const LinearMap& a);

// One slot of a Kronecker product; an identity slot stores no matrix.
struct KroneckerFactor {
  Index in_dim = 0;
  Index out_dim = 0;
  std::shared_ptr<const ComplexMatrix> matrix;  // null means identity

  static KroneckerFactor identity(Index n);
  static KroneckerFactor dense(ComplexMatrix m);
  bool is_identity() const noexcept { return matrix == nullptr; }
};

// Applies A_1 (x) ... (x) A_n slot by slot (mode products), variable 1 slowest.
ComplexMatrix kronecker_apply(const std::vector<KroneckerFactor>& factors, const ComplexMatrix& x);
LinearMap kronecker_map(std::vector<KroneckerFactor> factors);
ComplexMatrix kronecker_dense(const std::vector<KroneckerFactor>& factors,
                              Index cap = kDefaultMatrixCap);

struct LowRankOptions {
  Index initial_block = 8;
  Index oversample = 4;
  // Range detection threshold on the sampled block: sigma > max(rel * sigma_0, abs).
  double detect_rel = 1e-11;
  double detect_abs = 1e-12;
  // Accept when the residual bound is below max(rel * sigma_max, abs).
  double accept_rel = 1e-9;
  double accept_abs = 1e-11;
  Index residual_probes = 10;
  std::uint64_t seed = 0x5eed'cafe'f00dULL;
  // Dense fallback is allowed while min(rows, cols) <= this.
  Index dense_fallback_cap = kDefaultMatrixCap;
};

struct LowRankSvd {
  SvdResult svd;
  // Probabilistic bound on ||A - U S V^*|| (fails with probability <= 10^-probes).
  double residual_bound = 0.0;
  Index probe_block = 0;
  bool dense_fallback = false;

  // Upper bound on the spectral norm: sigma_max + residual_bound.
  double norm_bound() const { return svd.largest() + residual_bound; }
};

// Adaptive randomized range finder followed by an exact SVD of the compression.
// Deterministic for a fixed seed.
LowRankSvd low_rank_svd(const LinearMap& op, const LowRankOptions& options = {});

}  // namespace polyhardy::numeric
