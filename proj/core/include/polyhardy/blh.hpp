#pragma once
//
// Operator-valued inner symbol of a co-doubly commuting submodule, stored as
// the pencil Theta(z) = A + b_1(z) B acting on E = truncated H^2(D^{n-1})
// (the slots other than the distinguished inner slot).
//

#include <cstddef>
#include <optional>
#include <vector>

#include "polyhardy/disc.hpp"
#include "polyhardy/lattice.hpp"

namespace polyhardy::blh {

using numeric::Complex;
using numeric::ComplexMatrix;
using numeric::ComplexVector;
using numeric::Index;

inline constexpr Index kDefaultWindow = 8;
inline constexpr Index kTailWindow = 8;
// Upper bound on rows x columns of any dense block built by the checks below.
inline constexpr Index kWorkingEntries = Index{1} << 24;

struct BlhSymbol {
  disc::BlaschkeProduct theta1;
  // Slot p of the symbol's coordinates is slot permutation[p] of the scenario;
  // permutation[0] is the distinguished inner slot.
  std::vector<std::size_t> permutation;
  lattice::PolydiscScenario scenario;  // the original, unpermuted scenario
  std::vector<Index> e_dims;           // dims of E, in symbol order
  ComplexMatrix A;                     // I - B
  ComplexMatrix B;                     // prod_{k>=2} (I - P~_k)
  ComplexMatrix A_telescoping;         // sum_k P~_k prod_{l>k} (I - P~_l)

  Index e_dimension() const noexcept { return B.rows(); }
  Index distinguished_slot() const noexcept { return static_cast<Index>(permutation.front()); }
  ComplexMatrix eval(Complex z) const { return A + theta1.eval(z) * B; }
};

// Moves the first Inner slot to the front (or applies `permutation`, whose
// first entry must be an Inner slot). Throws ContractError without Inner slots.
BlhSymbol build_blh_symbol(const lattice::PolydiscScenario& s,
                           const std::optional<std::vector<std::size_t>>& permutation = std::nullopt,
                           Index cap = numeric::kDefaultMatrixCap);

struct PencilResiduals {
  double a_idempotent = 0.0;
  double b_idempotent = 0.0;
  double a_hermitian = 0.0;
  double b_hermitian = 0.0;
  double ab = 0.0;
  double sum_identity = 0.0;
  double telescoping = 0.0;  // ||A - A_telescoping||

  double max() const;
};

PencilResiduals pencil_residuals(const BlhSymbol& sym);

struct InnerCheck {
  double max_deviation = 0.0;
  Index grid_size = 0;
  // False when dim E is large and the deviation is the triangle-inequality bound
  // ||A^*A + B^*B - I|| + max ||b_1|^2 - 1| ||B^*B|| + 2 ||A^*B||.
  bool exact = true;
};

// max over the boundary grid of ||Theta^* Theta - I||. Pre: grid_size >= 64.
InnerCheck verify_inner(const BlhSymbol& sym, Index grid_size = 256, Index exact_limit = 256);

struct RangeCheck {
  double gap = 0.0;          // max(containment, coverage)
  double containment = 0.0;  // ||P_Q G||
  double coverage = 0.0;     // ||(I - G G^*) P_S J||
  Index window = 0;          // powers z^l, l <= window
  Index generator_rank = 0;
};

// Default window min(8, N_1 - 8); throws SizingError when negative.
Index default_window(Index truncation);

// Orthonormal basis of span{z_1^l Theta e : l <= window, e in E} in the
// scenario's original coordinates.
ComplexMatrix range_generators(const BlhSymbol& sym, Index window);

RangeCheck verify_range(const BlhSymbol& sym, const lattice::SubmoduleHandle& s,
                        std::optional<Index> window = std::nullopt);

struct WanderingSubspace {
  ComplexMatrix basis;  // orthonormal, ambient coordinates
  Index slot = 0;
  Index window = 0;
  Index dimension() const noexcept { return basis.cols(); }
};

// ran (P_S - M_s P_S M_s^*) on multi-indices with alpha_s <= window.
WanderingSubspace wandering_subspace(const lattice::SubmoduleHandle& s, Index slot = 0,
                                     std::optional<Index> window = std::nullopt,
                                     double rank_tol = numeric::kDefaultRankTol);

// Gap between span{z_s^l w : l <= window} and ran P_S on the window.
RangeCheck wandering_generation_check(const lattice::SubmoduleHandle& s, const WanderingSubspace& w);

}  // namespace polyhardy::blh
