#include "polyhardy/blh.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "polyhardy/errors.hpp"

namespace polyhardy::blh {

namespace {

using numeric::KroneckerFactor;

void require_budget(Index rows, Index cols, const char* what) {
  if (rows > 0 && cols > kWorkingEntries / rows) {
    std::ostringstream msg;
    msg << what << ": dense working block " << rows << "x" << cols << " exceeds the budget of "
        << kWorkingEntries << " entries; lower the truncation";
    throw SizingError(msg.str(), static_cast<std::size_t>(std::max(rows, cols)));
  }
}

// Pencil residual below which the generator span is built from its orthogonal splitting.
constexpr double kSplitTol = 1e-12;

std::vector<std::size_t> inverse(const std::vector<std::size_t>& perm) {
  std::vector<std::size_t> inv(perm.size());
  for (std::size_t p = 0; p < perm.size(); ++p) inv[perm[p]] = p;
  return inv;
}

ComplexMatrix dense_window(const std::vector<Index>& dims, Index slot, Index window) {
  std::vector<Index> limits(dims.size());
  for (std::size_t k = 0; k < dims.size(); ++k) limits[k] = dims[k] - 1;
  limits[static_cast<std::size_t>(slot)] = window;
  const numeric::LinearMap j = lattice::window_injection(dims, limits);
  require_budget(j.rows(), j.cols(), "window");
  return j.apply(ComplexMatrix::Identity(j.cols(), j.cols()));
}

// Containment of span(g) in ran P_S and coverage of P_S on the window.
RangeCheck windowed_gap(const lattice::SubmoduleHandle& s, const ComplexMatrix& g, Index slot,
                        Index window) {
  RangeCheck r;
  r.window = window;
  r.generator_rank = g.cols();
  r.containment = g.cols() ? numeric::spectral_norm(s.quotient_projector_map().apply(g)) : 0.0;
  const ComplexMatrix x = s.projector_map().apply(dense_window(s.dims(), slot, window));
  const ComplexMatrix residual = g.cols() ? ComplexMatrix(x - g * (g.adjoint() * x)) : x;
  r.coverage = numeric::spectral_norm(residual);
  r.gap = std::max(r.containment, r.coverage);
  return r;
}

}  // namespace

BlhSymbol build_blh_symbol(const lattice::PolydiscScenario& s,
                           const std::optional<std::vector<std::size_t>>& permutation, Index cap) {
  s.validate();
  const auto inner = s.inner_slots();
  if (inner.empty()) throw ContractError("build_blh_symbol: scenario has no Inner slot");

  BlhSymbol sym;
  sym.scenario = s;
  if (permutation) {
    sym.permutation = *permutation;
    if (sym.permutation.size() != s.factors.size()) {
      throw ContractError("build_blh_symbol: permutation size mismatch");
    }
    (void)s.permuted(sym.permutation);  // validates
    if (!s.factors[sym.permutation.front()].is_inner()) {
      throw ContractError("build_blh_symbol: the first permuted slot must be Inner");
    }
  } else {
    const auto first = static_cast<std::size_t>(inner.front());
    sym.permutation.push_back(first);
    for (std::size_t k = 0; k < s.factors.size(); ++k) {
      if (k != first) sym.permutation.push_back(k);
    }
  }
  sym.theta1 = s.factors[sym.permutation.front()].blaschke();

  std::vector<KroneckerFactor> b_factors;
  std::vector<lattice::SlotSpace> e_slots;
  for (std::size_t p = 1; p < sym.permutation.size(); ++p) {
    const std::size_t k = sym.permutation[p];
    e_slots.push_back(lattice::make_slot_space(s.factors[k], s.degrees[k]));
    sym.e_dims.push_back(s.degrees[k] + 1);
    const auto& slot = e_slots.back();
    b_factors.push_back(slot.factor.is_inner() ? KroneckerFactor::dense(slot.quotient_projector())
                                               : KroneckerFactor::identity(slot.ambient_dimension()));
  }
  sym.B = numeric::kronecker_dense(b_factors, cap);
  sym.B = (0.5 * (sym.B + sym.B.adjoint())).eval();
  const Index d = sym.B.rows();
  sym.A = ComplexMatrix::Identity(d, d) - sym.B;

  // P~_k on E for the remaining slots, summed by the telescoping formula.
  std::vector<ComplexMatrix> family;
  for (std::size_t p = 0; p < e_slots.size(); ++p) {
    std::vector<KroneckerFactor> f;
    for (std::size_t q = 0; q < e_slots.size(); ++q) {
      f.push_back(q == p ? KroneckerFactor::dense(e_slots[q].factor.is_inner()
                                                      ? e_slots[q].inner_range_projector()
                                                      : ComplexMatrix::Zero(sym.e_dims[q], sym.e_dims[q]))
                         : KroneckerFactor::identity(sym.e_dims[q]));
    }
    family.push_back(numeric::kronecker_dense(f, cap));
  }
  sym.A_telescoping = lattice::projection_sum_forms(family).forward;
  return sym;
}

double PencilResiduals::max() const {
  return std::max({a_idempotent, b_idempotent, a_hermitian, b_hermitian, ab, sum_identity, telescoping});
}

PencilResiduals pencil_residuals(const BlhSymbol& sym) {
  using numeric::spectral_norm;
  const Index d = sym.e_dimension();
  PencilResiduals r;
  r.a_idempotent = spectral_norm(sym.A * sym.A - sym.A);
  r.b_idempotent = spectral_norm(sym.B * sym.B - sym.B);
  r.a_hermitian = spectral_norm(sym.A - sym.A.adjoint());
  r.b_hermitian = spectral_norm(sym.B - sym.B.adjoint());
  r.ab = spectral_norm(sym.A * sym.B);
  r.sum_identity = spectral_norm(sym.A + sym.B - ComplexMatrix::Identity(d, d));
  r.telescoping = spectral_norm(sym.A - sym.A_telescoping);
  return r;
}

InnerCheck verify_inner(const BlhSymbol& sym, Index grid_size, Index exact_limit) {
  if (grid_size < 64) throw ContractError("verify_inner: grid_size must be at least 64");
  const Index d = sym.e_dimension();
  const ComplexMatrix g0 = sym.A.adjoint() * sym.A;
  const ComplexMatrix g1 = sym.A.adjoint() * sym.B;
  const ComplexMatrix g2 = sym.B.adjoint() * sym.B;
  const ComplexMatrix id = ComplexMatrix::Identity(d, d);

  InnerCheck out;
  out.grid_size = grid_size;
  out.exact = d <= exact_limit;
  double worst_modulus = 0.0;
  double worst_abs = 0.0;
  for (Index k = 0; k < grid_size; ++k) {
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(grid_size);
    const Complex t = sym.theta1.eval(std::polar(1.0, angle));
    worst_abs = std::max(worst_abs, std::abs(t));
    worst_modulus = std::max(worst_modulus, std::abs(std::norm(t) - 1.0));
    if (!out.exact) continue;
    const ComplexMatrix m = g0 - id + t * g1 + std::conj(t) * g1.adjoint() + std::norm(t) * g2;
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(m, Eigen::EigenvaluesOnly);
    if (eig.info() != Eigen::Success) throw NumericError("verify_inner: eigenvalue solver failed");
    out.max_deviation = std::max(out.max_deviation, eig.eigenvalues().cwiseAbs().maxCoeff());
  }
  if (!out.exact) {
    using numeric::spectral_norm;
    out.max_deviation = spectral_norm(g0 + g2 - id) + worst_modulus * spectral_norm(g2) +
                        2.0 * worst_abs * spectral_norm(g1);
  }
  return out;
}

Index default_window(Index truncation) {
  const Index w = std::min(kDefaultWindow, truncation - kTailWindow);
  if (w < 0) {
    std::ostringstream msg;
    msg << "range window: truncation " << truncation << " leaves no interior window (need at least "
        << kTailWindow << ")";
    throw SizingError(msg.str(), static_cast<std::size_t>(std::max<Index>(truncation, 0)));
  }
  return w;
}

ComplexMatrix range_generators(const BlhSymbol& sym, Index window) {
  const Index n1 = sym.scenario.degrees[sym.permutation.front()];
  if (window < 0 || window > n1) throw SizingError("range_generators: window outside 0..N_1",
                                                   static_cast<std::size_t>(std::max<Index>(window, 0)));
  const ComplexVector theta = disc::taylor_coefficients(sym.theta1, n1);
  const Index e = sym.e_dimension();
  const Index rows = (n1 + 1) * e;
  const Index cols = (window + 1) * e;
  require_budget(rows, cols, "range_generators");

  ComplexMatrix basis;
  if (pencil_residuals(sym).max() <= kSplitTol) {
    // A and B are complementary orthogonal projectors, so the span splits orthogonally
    // into span{e_l} (x) ran A and span{z^l b_1} (x) ran B.
    const ComplexMatrix ua = numeric::range_basis(sym.A, 1e-10);
    const ComplexMatrix ub = numeric::range_basis(sym.B, 1e-10);
    ComplexMatrix toeplitz = ComplexMatrix::Zero(n1 + 1, window + 1);
    for (Index l = 0; l <= window; ++l) {
      for (Index a = l; a <= n1; ++a) toeplitz(a, l) = theta(a - l);
    }
    const ComplexMatrix qt = numeric::range_basis(toeplitz, 1e-10);
    const Index ka = (window + 1) * ua.cols();
    basis = ComplexMatrix::Zero(rows, ka + qt.cols() * ub.cols());
    for (Index l = 0; l <= window; ++l) basis.block(l * e, l * ua.cols(), e, ua.cols()) = ua;
    for (Index c = 0; c < qt.cols(); ++c) {
      for (Index a = 0; a <= n1; ++a) {
        if (qt(a, c) != Complex(0.0)) basis.block(a * e, ka + c * ub.cols(), e, ub.cols()) = qt(a, c) * ub;
      }
    }
  } else {
    // Column block l holds e_l (x) A + (z^l b_1) (x) B, variable 1 slowest.
    ComplexMatrix g = ComplexMatrix::Zero(rows, cols);
    for (Index l = 0; l <= window; ++l) {
      auto block = g.middleCols(l * e, e);
      block.middleRows(l * e, e) += sym.A;
      for (Index a = l; a <= n1; ++a) {
        if (theta(a - l) != Complex(0.0)) block.middleRows(a * e, e) += theta(a - l) * sym.B;
      }
    }
    basis = numeric::range_basis(g, 1e-10);
  }

  std::vector<Index> sym_dims{n1 + 1};
  sym_dims.insert(sym_dims.end(), sym.e_dims.begin(), sym.e_dims.end());
  const auto inv = inverse(sym.permutation);
  return numeric::permute_tensor_rows(basis, sym_dims, inv);
}

RangeCheck verify_range(const BlhSymbol& sym, const lattice::SubmoduleHandle& s, std::optional<Index> window) {
  if (s.n() != static_cast<Index>(sym.permutation.size()) || s.dims() != sym.scenario.dims()) {
    throw ContractError("verify_range: symbol and handle have different truncations");
  }
  const Index n1 = sym.scenario.degrees[sym.permutation.front()];
  const Index w = window ? *window : default_window(n1);
  const ComplexMatrix g = range_generators(sym, w);
  return windowed_gap(s, g, sym.distinguished_slot(), w);
}

WanderingSubspace wandering_subspace(const lattice::SubmoduleHandle& s, Index slot, std::optional<Index> window,
                                     double rank_tol) {
  if (slot < 0 || slot >= s.n()) throw ContractError("wandering_subspace: slot out of range");
  WanderingSubspace out;
  out.slot = slot;
  const Index n_slot = s.scenario().degrees[static_cast<std::size_t>(slot)];
  out.window = window ? *window : default_window(n_slot);
  if (s.is_degenerate()) {
    out.basis = ComplexMatrix(s.ambient_dimension(), 0);
    return out;
  }
  const ComplexMatrix j = dense_window(s.dims(), slot, out.window);
  const numeric::LinearMap ps = s.projector_map();
  const numeric::LinearMap m = lattice::coordinate_shift_map(s.scenario(), slot);
  const ComplexMatrix x = ps.apply(j) - m.apply(ps.apply(m.apply_adjoint(j)));
  out.basis = numeric::range_basis(x, rank_tol);
  return out;
}

RangeCheck wandering_generation_check(const lattice::SubmoduleHandle& s, const WanderingSubspace& w) {
  const Index r = w.dimension();
  require_budget(s.ambient_dimension(), (w.window + 1) * r, "wandering_generation_check");
  const numeric::LinearMap m = lattice::coordinate_shift_map(s.scenario(), w.slot);
  ComplexMatrix g(s.ambient_dimension(), (w.window + 1) * r);
  ComplexMatrix current = w.basis;
  for (Index l = 0; l <= w.window; ++l) {
    g.middleCols(l * r, r) = current;
    current = m.apply(current);
  }
  return windowed_gap(s, numeric::range_basis(g, 1e-10), w.slot, w.window);
}

}  // namespace polyhardy::blh
