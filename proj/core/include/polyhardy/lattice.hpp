#pragma once
//
// Truncated H^2(D^n) with monomial multi-indices ordered lexicographically,
// variable 1 slowest. A scenario fixes one factor per variable; the
// submodule is S = sum_i b_i(z_i) H^2(D^n) over the Inner slots and the
// quotient is the tensor product of the per-slot quotients.
//
// Slots are 0-based throughout the API.
//

#include <optional>
#include <vector>

#include "polyhardy/disc.hpp"
#include "polyhardy/linear_map.hpp"
#include "polyhardy/numeric.hpp"

namespace polyhardy::lattice {

using numeric::Complex;
using numeric::ComplexMatrix;
using numeric::Index;
using numeric::KroneckerFactor;
using numeric::LinearMap;

class DiscFactor {
 public:
  enum class Kind { Inner, FullHardy };

  static DiscFactor inner(disc::BlaschkeProduct b);
  static DiscFactor full_hardy();

  Kind kind() const noexcept { return kind_; }
  bool is_inner() const noexcept { return kind_ == Kind::Inner; }
  // Pre: is_inner().
  const disc::BlaschkeProduct& blaschke() const;

 private:
  Kind kind_ = Kind::FullHardy;
  disc::BlaschkeProduct blaschke_;
};

// Default truncation for a slot in an n-variable scenario.
//   n = 2:  Inner max(60, degree + 40), FullHardy 60
//   n >= 3: Inner max(28, degree + 20), FullHardy 12
Index default_truncation(const DiscFactor& f, Index n_vars);

struct PolydiscScenario {
  std::vector<DiscFactor> factors;
  std::vector<Index> degrees;  // truncation N_i per slot

  // Fills unset degrees with default_truncation and validates.
  static PolydiscScenario make(std::vector<DiscFactor> factors,
                               const std::vector<std::optional<Index>>& degree_overrides = {});

  // Throws ContractError (n < 2, size mismatch) or SizingError (N_i < degree).
  void validate() const;

  Index n() const noexcept { return static_cast<Index>(factors.size()); }
  std::vector<Index> dims() const;  // N_i + 1
  Index ambient_dimension() const;
  std::vector<Index> inner_slots() const;
  bool is_degenerate() const { return inner_slots().empty(); }

  // Same scenario with slots reordered: new slot p is old slot perm[p].
  PolydiscScenario permuted(const std::vector<std::size_t>& perm) const;
};

// Per-slot factored data. For an Inner slot the quotient basis is the model
// space (empty for degree 0) and the complement spans truncated b H^2; for a
// FullHardy slot the quotient basis is the identity and the complement is empty.
struct SlotSpace {
  DiscFactor factor;
  Index truncation = 0;
  ComplexMatrix quotient_basis;    // V_k, (N+1) x q_k
  ComplexMatrix complement;        // W_k, (N+1) x (N+1-q_k)
  ComplexMatrix compressed_shift;  // q_k x q_k
  double gram_deviation = 0.0;

  Index ambient_dimension() const noexcept { return truncation + 1; }
  Index quotient_dimension() const noexcept { return quotient_basis.cols(); }
  // I - V V^*: the slot projection onto truncated b H^2 (zero for FullHardy).
  ComplexMatrix inner_range_projector() const;
  ComplexMatrix quotient_projector() const;
  // Norm of the top-degree row of the quotient basis: the scale of truncation
  // defects in this slot (0 for FullHardy and degree-0 slots).
  double truncation_tail() const;
};

SlotSpace make_slot_space(const DiscFactor& f, Index truncation);

class SubmoduleHandle {
 public:
  SubmoduleHandle(PolydiscScenario scenario, std::vector<SlotSpace> slots);

  const PolydiscScenario& scenario() const noexcept { return scenario_; }
  const std::vector<SlotSpace>& slots() const noexcept { return slots_; }
  const SlotSpace& slot(Index i) const;
  Index n() const noexcept { return scenario_.n(); }
  std::vector<Index> dims() const { return scenario_.dims(); }
  std::vector<Index> quotient_dims() const;
  Index ambient_dimension() const { return scenario_.ambient_dimension(); }
  Index quotient_dimension() const;
  const std::vector<Index>& inner_slots() const noexcept { return inner_slots_; }
  bool is_degenerate() const noexcept { return inner_slots_.empty(); }
  // True when P_S = I (some Inner slot has a degree-0 factor).
  bool is_full_module() const;

  // P_Q = prod_i (I - P~_i) = V_1 V_1^* (x) ... (x) V_n V_n^*.
  std::vector<KroneckerFactor> quotient_projector_factors() const;
  LinearMap quotient_projector_map() const;
  LinearMap projector_map() const;  // P_S = I - P_Q
  // Embedded quotient basis V_1 (x) ... (x) V_n.
  LinearMap quotient_basis_map() const;

  // Dense forms, subject to the matrix cap on the ambient dimension.
  ComplexMatrix projector(Index cap = numeric::kDefaultMatrixCap) const;
  ComplexMatrix quotient_projector(Index cap = numeric::kDefaultMatrixCap) const;
  ComplexMatrix quotient_basis(Index cap = numeric::kDefaultMatrixCap) const;
  // P~_i for every slot (zero for FullHardy slots).
  std::vector<ComplexMatrix> slot_projections(Index cap = numeric::kDefaultMatrixCap) const;

 private:
  PolydiscScenario scenario_;
  std::vector<SlotSpace> slots_;
  std::vector<Index> inner_slots_;
};

class QuotientHandle {
 public:
  QuotientHandle(PolydiscScenario scenario, std::vector<SlotSpace> slots);

  const PolydiscScenario& scenario() const noexcept { return scenario_; }
  const std::vector<SlotSpace>& slots() const noexcept { return slots_; }
  Index n() const noexcept { return scenario_.n(); }
  std::vector<Index> quotient_dims() const;
  Index dimension() const;

  // C_{z_i}: compressed shift in slot i, identity elsewhere.
  std::vector<KroneckerFactor> compressed_shift_factors(Index i) const;
  LinearMap compressed_shift_map(Index i) const;
  ComplexMatrix compressed_shift(Index i, Index cap = numeric::kDefaultMatrixCap) const;

 private:
  PolydiscScenario scenario_;
  std::vector<SlotSpace> slots_;
};

// Sum of commuting projections: the two telescoping forms and the product form.
struct ProjectionSumForms {
  ComplexMatrix forward;   // sum_i P_i prod_{j>i} (I - P_j)
  ComplexMatrix backward;  // sum_i P_i prod_{j<i} (I - P_j)
  ComplexMatrix product;   // I - prod_i (I - P_i)
  double max_commutator = 0.0;
  double max_disagreement = 0.0;
};

// Throws ContractError on invalid or non-commuting input (tolerance 1e-10).
ProjectionSumForms projection_sum_forms(const std::vector<ComplexMatrix>& projections);
// Returns the product form after asserting agreement within 1e-10 (AssertionFailure).
ComplexMatrix commuting_projection_sum(const std::vector<ComplexMatrix>& projections);

// M_{z_i} on the truncated ambient space.
std::vector<KroneckerFactor> coordinate_shift_factors(const PolydiscScenario& s, Index i);
LinearMap coordinate_shift_map(const PolydiscScenario& s, Index i);
ComplexMatrix coordinate_shift(const PolydiscScenario& s, Index i,
                               Index cap = numeric::kDefaultMatrixCap);

// P~_i = I (x) ... (x) (I - V_i V_i^*) (x) ... (x) I, dense.
ComplexMatrix slot_projection(const PolydiscScenario& s, Index i,
                              Index cap = numeric::kDefaultMatrixCap);

SubmoduleHandle submodule_projection(const PolydiscScenario& s);
QuotientHandle quotient_assembly(const PolydiscScenario& s);
QuotientHandle quotient_of(const SubmoduleHandle& h);

// max_{i<j} ||C_i C_j^* - C_j^* C_i||.
double doubly_commuting_check(const QuotientHandle& q);

// Oracle: U^* M_{z_i} U with U the embedded quotient basis, from ambient operators.
ComplexMatrix ambient_compressed_shift(const SubmoduleHandle& h, Index i,
                                       Index cap = numeric::kDefaultMatrixCap);

// Coordinate injection of the multi-indices with alpha_k <= limits[k] for all k.
LinearMap window_injection(const std::vector<Index>& dims, const std::vector<Index>& limits);

// ||(I - P_S) M_{z_i} P_S E||, E the multi-indices with alpha_i <= N_i - 1.
// Vanishes up to truncation: bounded by a small multiple of slot(i).truncation_tail().
double shift_invariance_defect(const SubmoduleHandle& h, Index i);
// Tolerance for shift_invariance_defect: 1e-10 + 10 * truncation tail of slot i.
double shift_invariance_tolerance(const SubmoduleHandle& h, Index i);

}  // namespace polyhardy::lattice
