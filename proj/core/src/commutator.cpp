#include "polyhardy/commutator.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "polyhardy/errors.hpp"

namespace polyhardy::commutator {

namespace {

using numeric::KroneckerFactor;

void require_pair(const lattice::SubmoduleHandle& h, Index i, Index j, const char* what) {
  if (!(0 <= i && i < j && j < h.n())) {
    std::ostringstream msg;
    msg << what << ": need 0 <= i < j < n, got (" << i << ", " << j << ") with n = " << h.n();
    throw ContractError(msg.str());
  }
}

// Options for bounding the norm of an operator that should be ~0.
numeric::LowRankOptions error_options() {
  numeric::LowRankOptions o;
  o.detect_abs = 1e-10;
  o.accept_abs = 1e-9;
  return o;
}

double error_bound(const LinearMap& op) { return numeric::low_rank_svd(op, error_options()).norm_bound(); }

std::optional<double> predicted_norm_for(const lattice::PolydiscScenario& s, Index i, Index j) {
  const auto& fi = s.factors[static_cast<std::size_t>(i)];
  const auto& fj = s.factors[static_cast<std::size_t>(j)];
  if (!fi.is_inner() || !fj.is_inner()) return std::nullopt;
  const double ai = std::norm(fi.blaschke().at_zero());
  const double aj = std::norm(fj.blaschke().at_zero());
  return std::sqrt(std::max(0.0, 1.0 - ai) * std::max(0.0, 1.0 - aj));
}

Index other_quotient_product(const lattice::SubmoduleHandle& h, Index i, Index j) {
  Index p = 1;
  for (Index k = 0; k < h.n(); ++k) {
    if (k != i && k != j) p *= h.slot(k).quotient_dimension();
  }
  return p;
}

std::vector<double> to_std(const numeric::RealVector& v) { return {v.data(), v.data() + v.size()}; }

}  // namespace

LinearMap cross_commutator_bruteforce(const lattice::SubmoduleHandle& h, Index i, Index j) {
  require_pair(h, i, j, "cross_commutator_bruteforce");
  const LinearMap ps = h.projector_map();
  const LinearMap mi = lattice::coordinate_shift_map(h.scenario(), i);
  const LinearMap mj = lattice::coordinate_shift_map(h.scenario(), j);
  return ps * mi.adjoint() * mj * ps - ps * mj * ps * mi.adjoint() * ps;
}

LinearMap cross_commutator_reduced(const lattice::SubmoduleHandle& h, Index i, Index j) {
  require_pair(h, i, j, "cross_commutator_reduced");
  const LinearMap ps = h.projector_map();
  const LinearMap mi = lattice::coordinate_shift_map(h.scenario(), i);
  const LinearMap mj = lattice::coordinate_shift_map(h.scenario(), j);
  return ps * mj * h.quotient_projector_map() * mi.adjoint() * ps;
}

ComplexMatrix cross_commutator_bruteforce_dense(const lattice::SubmoduleHandle& h, Index i, Index j,
                                                Index cap) {
  const ComplexMatrix range = numeric::orthogonal_complement(h.quotient_basis(cap));
  return range.adjoint() * cross_commutator_bruteforce(h, i, j).apply(range);
}

LinearMap StructuralCommutator::embedded() const { return numeric::kronecker_map(embedded_factors); }

std::vector<double> StructuralCommutator::singular_values() const {
  return std::vector<double>(static_cast<std::size_t>(identity_dimension), operator_norm());
}

StructuralCommutator cross_commutator_structural(const lattice::SubmoduleHandle& h, Index i, Index j) {
  require_pair(h, i, j, "cross_commutator_structural");
  for (Index k : {i, j}) {
    if (!h.slot(k).factor.is_inner()) {
      std::ostringstream msg;
      msg << "cross_commutator_structural: slot " << k << " is FullHardy; the tensor formula needs "
          << "Inner factors in both slots";
      throw ContractError(msg.str());
    }
  }
  StructuralCommutator out;
  out.i = i;
  out.j = j;
  out.identity_dimension = other_quotient_product(h, i, j);
  for (Index k = 0; k < h.n(); ++k) {
    const auto& slot = h.slot(k);
    const ComplexMatrix& v = slot.quotient_basis;
    const ComplexMatrix& w = slot.complement;
    if (k == i || k == j) {
      const ComplexMatrix shift = disc::truncated_shift(slot.truncation);
      // C_b = V^* S^* W maps b H^2 into the model space.
      const ComplexMatrix c = v.adjoint() * shift.adjoint() * w;
      const double norm = numeric::spectral_norm(c);
      if (k == i) {
        out.factor_norm_i = norm;
        out.compact_factors.push_back(c);
        out.embedded_factors.push_back(KroneckerFactor::dense(v * c * w.adjoint()));
      } else {
        out.factor_norm_j = norm;
        out.compact_factors.push_back(c.adjoint());
        out.embedded_factors.push_back(KroneckerFactor::dense(w * c.adjoint() * v.adjoint()));
      }
    } else {
      out.compact_factors.push_back(ComplexMatrix::Identity(v.cols(), v.cols()));
      out.embedded_factors.push_back(slot.factor.is_inner()
                                         ? KroneckerFactor::dense(slot.quotient_projector())
                                         : KroneckerFactor::identity(slot.ambient_dimension()));
    }
  }
  return out;
}

CommutatorReport commutator_report(const lattice::SubmoduleHandle& h, Index i, Index j,
                                   const CommutatorOptions& options) {
  require_pair(h, i, j, "commutator_report");
  CommutatorReport r;
  r.i = i;
  r.j = j;
  r.rank_tol = options.rank_tol;

  const LinearMap brute = cross_commutator_bruteforce(h, i, j);
  const numeric::LowRankSvd lr = numeric::low_rank_svd(brute);
  const numeric::RealVector& sv = lr.svd.singular_values;
  r.operator_norm = lr.svd.largest();
  r.hs_norm = sv.norm();
  r.numerical_rank = numeric::numerical_rank(sv, options.rank_tol);
  r.residual_bound = lr.residual_bound;
  const auto listed = std::min<std::size_t>(static_cast<std::size_t>(sv.size()), options.max_listed_values);
  r.leading_singular_values.assign(sv.data(), sv.data() + listed);
  r.identity_error = error_bound(brute - cross_commutator_reduced(h, i, j));

  r.predicted_norm = predicted_norm_for(h.scenario(), i, j);
  if (r.predicted_norm) {
    const StructuralCommutator st = cross_commutator_structural(h, i, j);
    r.structural_norm = st.operator_norm();
    r.structural_vs_oracle_error = error_bound(brute - st.embedded());
    const Index others = other_quotient_product(h, i, j);
    r.predicted_rank = *r.predicted_norm > 0.0 ? others : 0;
    r.tensor_hs_prediction = *r.predicted_norm * std::sqrt(static_cast<double>(others));
    if (others == 0) r.predicted_norm = 0.0;
  }

  if (options.enforce) {
    std::ostringstream pair;
    pair << "commutator(" << i + 1 << "," << j + 1 << ")";
    auto fail = [&](const std::string& what) { throw AssertionFailure(pair.str(), what); };
    std::ostringstream msg;
    if (r.identity_error > r.identity_tol) {
      msg << "brute-force commutator differs from P_S M_j P_Q M_i^* P_S by " << r.identity_error;
      fail(msg.str());
    }
    if (r.structural_vs_oracle_error && *r.structural_vs_oracle_error > r.structural_tol) {
      msg << "structural vs oracle difference " << *r.structural_vs_oracle_error << " > "
          << r.structural_tol;
      fail(msg.str());
    }
    if (r.predicted_norm && std::abs(r.operator_norm - *r.predicted_norm) > r.norm_tol) {
      msg << "operator norm " << r.operator_norm << " differs from predicted " << *r.predicted_norm
          << " by more than " << r.norm_tol;
      fail(msg.str());
    }
    if (h.n() == 2 && r.numerical_rank > 1) {
      msg << "n = 2 commutator has numerical rank " << r.numerical_rank << " > 1";
      fail(msg.str());
    }
  }
  return r;
}

std::string to_string(DecayVerdict v) {
  switch (v) {
    case DecayVerdict::FiniteRank:
      return "FINITE_RANK";
    case DecayVerdict::CompactLikely:
      return "COMPACT_LIKELY";
    case DecayVerdict::NoncompactLikely:
      return "NONCOMPACT_LIKELY";
  }
  return "UNKNOWN";
}

DecayProfile essential_dc_diagnostic(const lattice::PolydiscScenario& base, Index i, Index j,
                                     const std::vector<Index>& schedule, double rank_tol) {
  base.validate();
  if (schedule.size() < 3) throw ContractError("essential_dc_diagnostic: schedule needs at least 3 entries");
  for (std::size_t k = 0; k < schedule.size(); ++k) {
    if (schedule[k] < 1 || (k > 0 && schedule[k] <= schedule[k - 1])) {
      throw ContractError("essential_dc_diagnostic: schedule must be positive and strictly increasing");
    }
  }
  if (!(0 <= i && i < j && j < base.n())) {
    throw ContractError("essential_dc_diagnostic: need 0 <= i < j < n");
  }

  DecayProfile p;
  p.i = i;
  p.j = j;
  p.schedule = schedule;
  p.rank_tol = rank_tol;
  for (Index k = 0; k < base.n(); ++k) {
    if (!base.factors[static_cast<std::size_t>(k)].is_inner()) p.grown_slots.push_back(k);
  }
  if (p.grown_slots.empty()) p.grown_slots = {i, j};
  p.predicted_norm = predicted_norm_for(base, i, j);

  for (Index N : schedule) {
    lattice::PolydiscScenario s = base;
    for (Index k : p.grown_slots) s.degrees[static_cast<std::size_t>(k)] = N;
    const lattice::SubmoduleHandle h = lattice::submodule_projection(s);
    const numeric::LowRankSvd lr = numeric::low_rank_svd(cross_commutator_bruteforce(h, i, j));
    DecaySnapshot snap;
    snap.N = N;
    snap.ambient_dimension = h.ambient_dimension();
    snap.singular_values = to_std(lr.svd.singular_values);
    snap.rank = numeric::numerical_rank(lr.svd.singular_values, rank_tol);
    p.snapshots.push_back(std::move(snap));
  }

  const auto& first = p.snapshots.front();
  p.reference_norm = p.predicted_norm ? *p.predicted_norm
                                      : (first.singular_values.empty() ? 0.0 : first.singular_values[0]);
  if (p.predicted_norm) {
    double dev = 0.0;
    for (const auto& snap : p.snapshots) {
      for (Index k = 0; k < snap.rank; ++k) {
        dev = std::max(dev, std::abs(snap.singular_values[static_cast<std::size_t>(k)] - *p.predicted_norm));
      }
    }
    p.plateau_deviation = dev;
  }

  bool constant = true;
  bool increasing = true;
  for (std::size_t k = 1; k < p.snapshots.size(); ++k) {
    constant = constant && p.snapshots[k].rank == p.snapshots[0].rank;
    increasing = increasing && p.snapshots[k].rank > p.snapshots[k - 1].rank;
  }
  if (constant) {
    p.verdict = DecayVerdict::FiniteRank;
  } else {
    bool plateau = increasing && p.reference_norm > 0.0;
    for (const auto& snap : p.snapshots) {
      if (!plateau) break;
      const double tail = snap.rank > 0 ? snap.singular_values[static_cast<std::size_t>(snap.rank - 1)] : 0.0;
      plateau = tail >= p.plateau_fraction * p.reference_norm;
    }
    p.verdict = plateau ? DecayVerdict::NoncompactLikely : DecayVerdict::CompactLikely;
  }
  return p;
}

std::string to_string(NormalityVerdict v) {
  return v == NormalityVerdict::EssentiallyNormal ? "ESSENTIALLY_NORMAL" : "NOT_ESSENTIALLY_NORMAL";
}

EssentialNormalityReport essential_normality_check(const lattice::QuotientHandle& q, double rank_tol) {
  EssentialNormalityReport out;
  out.quotient_dimension = q.dimension();
  const auto dims = q.quotient_dims();
  bool all_inner = true;
  for (Index i = 0; i < q.n(); ++i) {
    const auto& slot = q.slots()[static_cast<std::size_t>(i)];
    SelfCommutator sc;
    sc.slot = i;
    sc.inner = slot.factor.is_inner();
    all_inner = all_inner && sc.inner;
    const ComplexMatrix& c = slot.compressed_shift;
    sc.slot_factor = c.adjoint() * c - c * c.adjoint();
    sc.norm = numeric::spectral_norm(sc.slot_factor);
    sc.slot_rank = numeric::numerical_rank(sc.slot_factor, rank_tol);
    Index others = 1;
    for (Index k = 0; k < q.n(); ++k) {
      if (k != i) others *= dims[static_cast<std::size_t>(k)];
    }
    sc.tensor_rank = sc.slot_rank * others;
    if (others == 0) sc.norm = 0.0;
    out.slots.push_back(std::move(sc));
  }
  out.verdict = all_inner ? NormalityVerdict::EssentiallyNormal : NormalityVerdict::NotEssentiallyNormal;
  return out;
}

double c0_annihilation(const lattice::QuotientHandle& q, Index i) {
  if (i < 0 || i >= q.n()) throw ContractError("c0_annihilation: slot out of range");
  const auto& slot = q.slots()[static_cast<std::size_t>(i)];
  if (!slot.factor.is_inner()) throw ContractError("c0_annihilation: slot is FullHardy");
  if (slot.quotient_dimension() == 0) return 0.0;
  return numeric::spectral_norm(disc::evaluate_on_matrix(slot.factor.blaschke(), slot.compressed_shift));
}

}  // namespace polyhardy::commutator
