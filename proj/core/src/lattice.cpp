#include "polyhardy/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <utility>

#include "polyhardy/errors.hpp"

namespace polyhardy::lattice {

namespace {

constexpr double kCommuteTol = 1e-10;

void require_slot(Index n, Index i, const char* what) {
  if (i < 0 || i >= n) {
    std::ostringstream msg;
    msg << what << ": slot " << i << " out of range for n = " << n;
    throw ContractError(msg.str());
  }
}

std::vector<SlotSpace> build_slots(const PolydiscScenario& s) {
  s.validate();
  std::vector<SlotSpace> slots;
  slots.reserve(s.factors.size());
  for (std::size_t k = 0; k < s.factors.size(); ++k) {
    slots.push_back(make_slot_space(s.factors[k], s.degrees[k]));
  }
  return slots;
}

}  // namespace

DiscFactor DiscFactor::inner(disc::BlaschkeProduct b) {
  DiscFactor f;
  f.kind_ = Kind::Inner;
  f.blaschke_ = std::move(b);
  return f;
}

DiscFactor DiscFactor::full_hardy() { return DiscFactor{}; }

const disc::BlaschkeProduct& DiscFactor::blaschke() const {
  if (!is_inner()) throw ContractError("DiscFactor: FullHardy slot has no Blaschke product");
  return blaschke_;
}

Index default_truncation(const DiscFactor& f, Index n_vars) {
  if (n_vars <= 2) return f.is_inner() ? disc::default_truncation(f.blaschke()) : 60;
  return f.is_inner() ? std::max<Index>(28, f.blaschke().degree() + 20) : 12;
}

PolydiscScenario PolydiscScenario::make(std::vector<DiscFactor> factors,
                                        const std::vector<std::optional<Index>>& overrides) {
  if (!overrides.empty() && overrides.size() != factors.size()) {
    throw ContractError("PolydiscScenario: truncation override count does not match slot count");
  }
  PolydiscScenario s;
  const auto n = static_cast<Index>(factors.size());
  for (std::size_t k = 0; k < factors.size(); ++k) {
    const bool set = !overrides.empty() && overrides[k].has_value();
    s.degrees.push_back(set ? *overrides[k] : default_truncation(factors[k], n));
  }
  s.factors = std::move(factors);
  s.validate();
  return s;
}

void PolydiscScenario::validate() const {
  if (factors.size() < 2) throw ContractError("PolydiscScenario: n must be at least 2");
  if (degrees.size() != factors.size()) {
    throw ContractError("PolydiscScenario: truncation count does not match slot count");
  }
  for (std::size_t k = 0; k < factors.size(); ++k) {
    const Index deg = factors[k].is_inner() ? factors[k].blaschke().degree() : 0;
    if (degrees[k] < std::max<Index>(1, deg)) {
      std::ostringstream msg;
      msg << "PolydiscScenario: slot " << k << " truncation " << degrees[k]
          << " is below the minimum " << std::max<Index>(1, deg);
      throw SizingError(msg.str(), static_cast<std::size_t>(std::max<Index>(0, degrees[k])));
    }
  }
}

std::vector<Index> PolydiscScenario::dims() const {
  std::vector<Index> d;
  d.reserve(degrees.size());
  for (Index N : degrees) d.push_back(N + 1);
  return d;
}

Index PolydiscScenario::ambient_dimension() const {
  const auto d = dims();
  return numeric::product_of(d);
}

std::vector<Index> PolydiscScenario::inner_slots() const {
  std::vector<Index> out;
  for (std::size_t k = 0; k < factors.size(); ++k) {
    if (factors[k].is_inner()) out.push_back(static_cast<Index>(k));
  }
  return out;
}

PolydiscScenario PolydiscScenario::permuted(const std::vector<std::size_t>& perm) const {
  if (perm.size() != factors.size()) throw ContractError("permuted: permutation size mismatch");
  std::vector<bool> seen(perm.size(), false);
  PolydiscScenario out;
  for (std::size_t p : perm) {
    if (p >= perm.size() || seen[p]) throw ContractError("permuted: not a permutation");
    seen[p] = true;
    out.factors.push_back(factors[p]);
    out.degrees.push_back(degrees[p]);
  }
  return out;
}

ComplexMatrix SlotSpace::quotient_projector() const {
  return numeric::projector_from_basis(quotient_basis);
}

double SlotSpace::truncation_tail() const {
  if (!factor.is_inner() || quotient_basis.cols() == 0) return 0.0;
  return quotient_basis.row(quotient_basis.rows() - 1).norm();
}

ComplexMatrix SlotSpace::inner_range_projector() const {
  return numeric::projector_from_basis(complement);
}

SlotSpace make_slot_space(const DiscFactor& f, Index truncation) {
  SlotSpace slot;
  slot.factor = f;
  slot.truncation = truncation;
  const Index n = truncation + 1;
  if (!f.is_inner()) {
    slot.quotient_basis = ComplexMatrix::Identity(n, n);
    slot.complement = ComplexMatrix(n, 0);
    slot.compressed_shift = disc::truncated_shift(truncation);
    return slot;
  }
  if (f.blaschke().degree() == 0) {
    // A unimodular constant generates everything: empty quotient factor.
    slot.quotient_basis = ComplexMatrix(n, 0);
    slot.complement = ComplexMatrix::Identity(n, n);
    slot.compressed_shift = ComplexMatrix(0, 0);
    return slot;
  }
  disc::ModelSpace1D q = disc::model_space(f.blaschke(), truncation);
  slot.quotient_basis = std::move(q.basis);
  slot.complement = std::move(q.complement);
  slot.compressed_shift = std::move(q.compressed_shift);
  slot.gram_deviation = q.gram_deviation;
  return slot;
}

SubmoduleHandle::SubmoduleHandle(PolydiscScenario scenario, std::vector<SlotSpace> slots)
    : scenario_(std::move(scenario)), slots_(std::move(slots)) {
  if (slots_.size() != scenario_.factors.size()) {
    throw ContractError("SubmoduleHandle: slot data does not match the scenario");
  }
  inner_slots_ = scenario_.inner_slots();
}

const SlotSpace& SubmoduleHandle::slot(Index i) const {
  require_slot(n(), i, "SubmoduleHandle::slot");
  return slots_[static_cast<std::size_t>(i)];
}

std::vector<Index> SubmoduleHandle::quotient_dims() const {
  std::vector<Index> d;
  for (const auto& s : slots_) d.push_back(s.quotient_dimension());
  return d;
}

Index SubmoduleHandle::quotient_dimension() const {
  const auto d = quotient_dims();
  return numeric::product_of(d);
}

bool SubmoduleHandle::is_full_module() const { return !is_degenerate() && quotient_dimension() == 0; }

std::vector<KroneckerFactor> SubmoduleHandle::quotient_projector_factors() const {
  std::vector<KroneckerFactor> f;
  for (const auto& s : slots_) {
    if (s.factor.is_inner()) {
      f.push_back(KroneckerFactor::dense(s.quotient_projector()));
    } else {
      f.push_back(KroneckerFactor::identity(s.ambient_dimension()));
    }
  }
  return f;
}

LinearMap SubmoduleHandle::quotient_projector_map() const {
  return numeric::kronecker_map(quotient_projector_factors());
}

LinearMap SubmoduleHandle::projector_map() const {
  return LinearMap::identity(ambient_dimension()) - quotient_projector_map();
}

LinearMap SubmoduleHandle::quotient_basis_map() const {
  std::vector<KroneckerFactor> f;
  for (const auto& s : slots_) {
    if (s.factor.is_inner()) {
      f.push_back(KroneckerFactor::dense(s.quotient_basis));
    } else {
      f.push_back(KroneckerFactor::identity(s.ambient_dimension()));
    }
  }
  return numeric::kronecker_map(std::move(f));
}

ComplexMatrix SubmoduleHandle::quotient_projector(Index cap) const {
  const Index d = ambient_dimension();
  numeric::require_within_cap(d, d, cap, "SubmoduleHandle::quotient_projector");
  ComplexMatrix p = numeric::kronecker_dense(quotient_projector_factors(), cap);
  return (0.5 * (p + p.adjoint())).eval();
}

ComplexMatrix SubmoduleHandle::projector(Index cap) const {
  const Index d = ambient_dimension();
  numeric::require_within_cap(d, d, cap, "SubmoduleHandle::projector");
  if (is_degenerate()) return ComplexMatrix::Zero(d, d);
  return ComplexMatrix::Identity(d, d) - quotient_projector(cap);
}

ComplexMatrix SubmoduleHandle::quotient_basis(Index cap) const {
  const Index d = ambient_dimension();
  numeric::require_within_cap(d, quotient_dimension(), cap, "SubmoduleHandle::quotient_basis");
  std::vector<ComplexMatrix> f;
  for (const auto& s : slots_) f.push_back(s.quotient_basis);
  return numeric::tensor_product(std::span<const ComplexMatrix>(f), cap);
}

std::vector<ComplexMatrix> SubmoduleHandle::slot_projections(Index cap) const {
  std::vector<ComplexMatrix> out;
  for (Index i = 0; i < n(); ++i) out.push_back(slot_projection(scenario_, i, cap));
  return out;
}

QuotientHandle::QuotientHandle(PolydiscScenario scenario, std::vector<SlotSpace> slots)
    : scenario_(std::move(scenario)), slots_(std::move(slots)) {
  if (slots_.size() != scenario_.factors.size()) {
    throw ContractError("QuotientHandle: slot data does not match the scenario");
  }
}

std::vector<Index> QuotientHandle::quotient_dims() const {
  std::vector<Index> d;
  for (const auto& s : slots_) d.push_back(s.quotient_dimension());
  return d;
}

Index QuotientHandle::dimension() const {
  const auto d = quotient_dims();
  return numeric::product_of(d);
}

std::vector<KroneckerFactor> QuotientHandle::compressed_shift_factors(Index i) const {
  require_slot(n(), i, "QuotientHandle::compressed_shift_factors");
  std::vector<KroneckerFactor> f;
  for (std::size_t k = 0; k < slots_.size(); ++k) {
    if (static_cast<Index>(k) == i) {
      f.push_back(KroneckerFactor::dense(slots_[k].compressed_shift));
    } else {
      f.push_back(KroneckerFactor::identity(slots_[k].quotient_dimension()));
    }
  }
  return f;
}

LinearMap QuotientHandle::compressed_shift_map(Index i) const {
  return numeric::kronecker_map(compressed_shift_factors(i));
}

ComplexMatrix QuotientHandle::compressed_shift(Index i, Index cap) const {
  return numeric::kronecker_dense(compressed_shift_factors(i), cap);
}

ProjectionSumForms projection_sum_forms(const std::vector<ComplexMatrix>& p) {
  if (p.empty()) throw ContractError("commuting_projection_sum: empty family");
  const Index d = p.front().rows();
  for (const auto& pi : p) {
    if (pi.rows() != d || pi.cols() != d) {
      throw ContractError("commuting_projection_sum: projections must share one square shape");
    }
    numeric::require_finite(pi, "commuting_projection_sum");
    const double idem = numeric::spectral_norm(pi * pi - pi);
    const double herm = numeric::spectral_norm(pi - pi.adjoint());
    if (idem > kCommuteTol || herm > kCommuteTol) {
      std::ostringstream msg;
      msg << "commuting_projection_sum: input is not an orthogonal projection (idempotency "
          << idem << ", hermiticity " << herm << ")";
      throw ContractError(msg.str());
    }
  }
  ProjectionSumForms out;
  for (std::size_t i = 0; i < p.size(); ++i) {
    for (std::size_t j = i + 1; j < p.size(); ++j) {
      out.max_commutator =
          std::max(out.max_commutator, numeric::spectral_norm(p[i] * p[j] - p[j] * p[i]));
    }
  }
  if (out.max_commutator > kCommuteTol) {
    std::ostringstream msg;
    msg << "commuting_projection_sum: projections do not commute (max commutator norm "
        << out.max_commutator << ")";
    throw ContractError(msg.str());
  }

  const ComplexMatrix id = ComplexMatrix::Identity(d, d);
  const std::size_t n = p.size();
  out.forward = ComplexMatrix::Zero(d, d);
  ComplexMatrix tail = id;  // prod_{j>i} (I - P_j)
  for (std::size_t i = n; i-- > 0;) {
    out.forward += p[i] * tail;
    tail = (id - p[i]) * tail;
  }
  out.backward = ComplexMatrix::Zero(d, d);
  ComplexMatrix head = id;  // prod_{j<i} (I - P_j), applied as (I-P_{i-1})...(I-P_1)
  for (std::size_t i = 0; i < n; ++i) {
    out.backward += p[i] * head;
    head = (id - p[i]) * head;
  }
  ComplexMatrix prod = id;
  for (const auto& pi : p) prod = prod * (id - pi);
  out.product = id - prod;

  out.max_disagreement = std::max({numeric::spectral_norm(out.forward - out.backward),
                                   numeric::spectral_norm(out.forward - out.product),
                                   numeric::spectral_norm(out.backward - out.product)});
  return out;
}

ComplexMatrix commuting_projection_sum(const std::vector<ComplexMatrix>& p) {
  ProjectionSumForms f = projection_sum_forms(p);
  if (f.max_disagreement > kCommuteTol) {
    std::ostringstream msg;
    msg << "formulas disagree by " << f.max_disagreement;
    throw AssertionFailure("commuting_projection_sum", msg.str());
  }
  return std::move(f.product);
}

std::vector<KroneckerFactor> coordinate_shift_factors(const PolydiscScenario& s, Index i) {
  require_slot(s.n(), i, "coordinate_shift");
  std::vector<KroneckerFactor> f;
  for (Index k = 0; k < s.n(); ++k) {
    const Index N = s.degrees[static_cast<std::size_t>(k)];
    f.push_back(k == i ? KroneckerFactor::dense(disc::truncated_shift(N))
                       : KroneckerFactor::identity(N + 1));
  }
  return f;
}

LinearMap coordinate_shift_map(const PolydiscScenario& s, Index i) {
  return numeric::kronecker_map(coordinate_shift_factors(s, i));
}

ComplexMatrix coordinate_shift(const PolydiscScenario& s, Index i, Index cap) {
  return numeric::kronecker_dense(coordinate_shift_factors(s, i), cap);
}

ComplexMatrix slot_projection(const PolydiscScenario& s, Index i, Index cap) {
  require_slot(s.n(), i, "slot_projection");
  const Index d = s.ambient_dimension();
  numeric::require_within_cap(d, d, cap, "slot_projection");
  std::vector<KroneckerFactor> f;
  for (Index k = 0; k < s.n(); ++k) {
    const auto uk = static_cast<std::size_t>(k);
    if (k == i) {
      f.push_back(KroneckerFactor::dense(
          make_slot_space(s.factors[uk], s.degrees[uk]).inner_range_projector()));
    } else {
      f.push_back(KroneckerFactor::identity(s.degrees[uk] + 1));
    }
  }
  return numeric::kronecker_dense(f, cap);
}

SubmoduleHandle submodule_projection(const PolydiscScenario& s) {
  return SubmoduleHandle(s, build_slots(s));
}

QuotientHandle quotient_assembly(const PolydiscScenario& s) { return QuotientHandle(s, build_slots(s)); }

QuotientHandle quotient_of(const SubmoduleHandle& h) { return QuotientHandle(h.scenario(), h.slots()); }

double doubly_commuting_check(const QuotientHandle& q) {
  double worst = 0.0;
  if (q.dimension() == 0) return worst;
  for (Index i = 0; i < q.n(); ++i) {
    for (Index j = i + 1; j < q.n(); ++j) {
      const LinearMap ci = q.compressed_shift_map(i);
      const LinearMap cj = q.compressed_shift_map(j);
      const LinearMap diff = ci * cj.adjoint() - cj.adjoint() * ci;
      worst = std::max(worst, numeric::low_rank_svd(diff).norm_bound());
    }
  }
  return worst;
}

ComplexMatrix ambient_compressed_shift(const SubmoduleHandle& h, Index i, Index cap) {
  const ComplexMatrix u = h.quotient_basis(cap);
  const ComplexMatrix m = coordinate_shift(h.scenario(), i, cap);
  return u.adjoint() * m * u;
}

LinearMap window_injection(const std::vector<Index>& dims, const std::vector<Index>& limits) {
  if (dims.size() != limits.size()) throw ContractError("window_injection: size mismatch");
  const Index total = numeric::product_of(dims);
  std::vector<Index> coords;
  std::vector<Index> idx(dims.size(), 0);
  for (Index row = 0; row < total; ++row) {
    bool inside = true;
    for (std::size_t k = 0; k < dims.size(); ++k) inside = inside && idx[k] <= limits[k];
    if (inside) coords.push_back(row);
    for (std::size_t k = dims.size(); k-- > 0;) {
      if (++idx[k] < dims[k]) break;
      idx[k] = 0;
    }
  }
  return LinearMap::coordinate_injection(total, std::move(coords));
}

double shift_invariance_defect(const SubmoduleHandle& h, Index i) {
  require_slot(h.n(), i, "shift_invariance_defect");
  if (h.is_degenerate()) return 0.0;
  const auto dims = h.dims();
  std::vector<Index> limits(dims.size());
  for (std::size_t k = 0; k < dims.size(); ++k) limits[k] = dims[k] - 1;
  limits[static_cast<std::size_t>(i)] = dims[static_cast<std::size_t>(i)] - 2;
  const LinearMap op = h.quotient_projector_map() * coordinate_shift_map(h.scenario(), i) *
                       h.projector_map() * window_injection(dims, limits);
  return numeric::low_rank_svd(op).norm_bound();
}

double shift_invariance_tolerance(const SubmoduleHandle& h, Index i) {
  require_slot(h.n(), i, "shift_invariance_tolerance");
  return 1e-10 + 10.0 * h.slot(i).truncation_tail();
}

}  // namespace polyhardy::lattice
