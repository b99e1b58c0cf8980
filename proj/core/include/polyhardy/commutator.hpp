#pragma once
//
// Cross commutators [R_i^*, R_j] of the restrictions R_i = M_{z_i}|_S,
// computed from ambient truncated operators (oracle) and from the tensor
// factorization (structural), plus self-commutator and C_0 checks on the
// quotient.
//

#include <optional>
#include <string>
#include <vector>

#include "polyhardy/lattice.hpp"
#include "polyhardy/linear_map.hpp"

namespace polyhardy::commutator {

using numeric::ComplexMatrix;
using numeric::Index;
using numeric::LinearMap;

inline constexpr double kStructuralTol = 1e-7;
inline constexpr double kNormLawTol = 1e-6;
inline constexpr double kIdentityTol = 1e-9;

// P_S M_i^* M_j P_S - P_S M_j P_S M_i^* P_S on the ambient space.
LinearMap cross_commutator_bruteforce(const lattice::SubmoduleHandle& h, Index i, Index j);
// P_S M_j P_Q M_i^* P_S.
LinearMap cross_commutator_reduced(const lattice::SubmoduleHandle& h, Index i, Index j);
// The brute-force commutator restricted to an orthonormal basis of ran P_S (dense, capped).
ComplexMatrix cross_commutator_bruteforce_dense(const lattice::SubmoduleHandle& h, Index i, Index j,
                                                Index cap = numeric::kDefaultMatrixCap);

struct StructuralCommutator {
  Index i = 0;
  Index j = 0;
  // Compact tensor factors: slot i C_{b_i}, slot j C_{b_j}^*, identity elsewhere.
  std::vector<ComplexMatrix> compact_factors;
  // The same operator embedded in the ambient space, one factor per slot.
  std::vector<numeric::KroneckerFactor> embedded_factors;
  double factor_norm_i = 0.0;
  double factor_norm_j = 0.0;
  Index identity_dimension = 0;  // prod_{k != i, j} q_k

  LinearMap embedded() const;
  double operator_norm() const { return identity_dimension ? factor_norm_i * factor_norm_j : 0.0; }
  // Singular values of the tensor product, non-increasing.
  std::vector<double> singular_values() const;
};

// Throws ContractError unless i < j and both slots are Inner.
StructuralCommutator cross_commutator_structural(const lattice::SubmoduleHandle& h, Index i, Index j);

struct CommutatorOptions {
  double rank_tol = numeric::kDefaultRankTol;
  bool enforce = true;  // throw AssertionFailure when a law fails
  std::size_t max_listed_values = 32;
};

struct CommutatorReport {
  Index i = 0;
  Index j = 0;
  double operator_norm = 0.0;
  double hs_norm = 0.0;
  Index numerical_rank = 0;
  std::vector<double> leading_singular_values;
  double residual_bound = 0.0;  // randomized SVD a posteriori bound
  double identity_error = 0.0;  // brute force vs reduced form
  std::optional<double> structural_vs_oracle_error;
  std::optional<double> structural_norm;
  std::optional<double> predicted_norm;      // sqrt((1-|b_i(0)|^2)(1-|b_j(0)|^2))
  std::optional<Index> predicted_rank;       // prod_{k != i, j} q_k
  std::optional<double> tensor_hs_prediction;  // predicted_norm * sqrt(prod_{k != i, j} q_k)
  double rank_tol = numeric::kDefaultRankTol;
  double structural_tol = kStructuralTol;
  double norm_tol = kNormLawTol;
  double identity_tol = kIdentityTol;
};

CommutatorReport commutator_report(const lattice::SubmoduleHandle& h, Index i, Index j,
                                   const CommutatorOptions& options = {});

enum class DecayVerdict { FiniteRank, CompactLikely, NoncompactLikely };
std::string to_string(DecayVerdict v);

struct DecaySnapshot {
  Index N = 0;
  Index ambient_dimension = 0;
  Index rank = 0;
  std::vector<double> singular_values;
};

struct DecayProfile {
  Index i = 0;
  Index j = 0;
  std::vector<Index> schedule;
  std::vector<Index> grown_slots;
  std::vector<DecaySnapshot> snapshots;
  std::optional<double> predicted_norm;
  double reference_norm = 0.0;    // predicted norm, else sigma_max at the first N
  double plateau_fraction = 0.5;  // NONCOMPACT_LIKELY threshold
  // max |sigma_k - predicted| over the retained values, when predicted.
  std::optional<double> plateau_deviation;
  double rank_tol = numeric::kDefaultRankTol;
  DecayVerdict verdict = DecayVerdict::FiniteRank;
};

// Grows the FullHardy slots if there are any, otherwise slots i and j, through
// the schedule. Throws ContractError for a schedule that is not strictly
// increasing with at least three entries.
DecayProfile essential_dc_diagnostic(const lattice::PolydiscScenario& base, Index i, Index j,
                                     const std::vector<Index>& schedule,
                                     double rank_tol = numeric::kDefaultRankTol);

struct SelfCommutator {
  Index slot = 0;
  bool inner = false;
  ComplexMatrix slot_factor;  // [C^*, C] on the slot quotient
  double norm = 0.0;
  Index slot_rank = 0;
  Index tensor_rank = 0;  // slot_rank * prod_{k != slot} q_k
};

enum class NormalityVerdict { EssentiallyNormal, NotEssentiallyNormal };
std::string to_string(NormalityVerdict v);

struct EssentialNormalityReport {
  std::vector<SelfCommutator> slots;
  Index quotient_dimension = 0;
  NormalityVerdict verdict = NormalityVerdict::EssentiallyNormal;
};

EssentialNormalityReport essential_normality_check(const lattice::QuotientHandle& q,
                                                   double rank_tol = numeric::kDefaultRankTol);

// ||b_i(C)|| for the slot-i compressed shift. Pre: slot i Inner.
double c0_annihilation(const lattice::QuotientHandle& q, Index i);

}  // namespace polyhardy::commutator
