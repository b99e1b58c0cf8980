#include "polyhardy/rigidity.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "polyhardy/blh.hpp"
#include "polyhardy/commutator.hpp"
#include "polyhardy/errors.hpp"

namespace polyhardy::rigidity {

namespace {

void require_compatible(const lattice::SubmoduleHandle& a, const lattice::SubmoduleHandle& b) {
  if (a.n() != b.n() || a.dims() != b.dims()) {
    throw ContractError("rigidity: handles must share the variable count and truncation degrees");
  }
}

std::vector<bool> full_hardy_pattern(const lattice::SubmoduleHandle& s) {
  std::vector<bool> out;
  for (const auto& f : s.scenario().factors) out.push_back(!f.is_inner());
  return out;
}

}  // namespace

EqualityResult equality_test(const lattice::SubmoduleHandle& s1, const lattice::SubmoduleHandle& s2) {
  require_compatible(s1, s2);
  EqualityResult r;
  if (s1.is_degenerate() || s2.is_degenerate()) {
    // P_S = 0 for a degenerate handle; any nonzero projector is at distance 1.
    const bool zero1 = s1.is_degenerate();
    const bool zero2 = s2.is_degenerate();
    r.distance = zero1 == zero2 ? 0.0 : 1.0;
  } else if (s1.quotient_dimension() == 0 || s2.quotient_dimension() == 0) {
    r.distance = s1.quotient_dimension() == s2.quotient_dimension() ? 0.0 : 1.0;
  } else {
    // P_Q = (x)_k V_k V_k^*. Per slot the cosines multiply:
    // ||P_Q1 - P_Q2||^2 = 1 - prod_k (1 - s_k^2), s_k the slot gap.
    double log_cos2 = 0.0;
    bool orthogonal = false;
    for (Index k = 0; k < s1.n(); ++k) {
      const double sk = numeric::subspace_gap(s1.slot(k).quotient_basis, s2.slot(k).quotient_basis);
      if (sk >= 1.0) {
        orthogonal = true;
        break;
      }
      log_cos2 += std::log1p(-sk * sk);
    }
    r.distance = orthogonal ? 1.0 : std::sqrt(std::max(0.0, -std::expm1(log_cos2)));
  }
  r.equal = r.distance <= r.threshold;
  return r;
}

Fingerprint fingerprint(const lattice::SubmoduleHandle& s, double rel_tol) {
  Fingerprint f;
  f.rel_tol = rel_tol;
  f.degenerate = s.is_degenerate();
  if (f.degenerate) return f;
  f.quotient_dims = s.quotient_dims();
  f.full_hardy = full_hardy_pattern(s);
  for (Index i = 0; i < s.n(); ++i) {
    for (Index j = i + 1; j < s.n(); ++j) {
      const auto lr = numeric::low_rank_svd(commutator::cross_commutator_bruteforce(s, i, j));
      const auto& sv = lr.svd.singular_values;
      PairSpectrum p{i, j, {}};
      const Index r = numeric::numerical_rank(sv, rel_tol);
      for (Index k = 0; k < r; ++k) {
        if (sv(k) > 1e-12) p.singular_values.push_back(sv(k));
      }
      f.pairs.push_back(std::move(p));
    }
  }
  try {
    f.wandering_dimension = blh::wandering_subspace(s, 0).dimension();
  } catch (const SizingError&) {
    f.wandering_dimension.reset();
  }
  return f;
}

FingerprintDifference compare_fingerprints(const Fingerprint& a, const Fingerprint& b, double tol) {
  FingerprintDifference d;
  auto record = [&](const std::string& field, double diff) {
    d.max_difference = std::max(d.max_difference, diff);
    if (diff > tol) d.differing_fields.push_back(field);
  };
  record("degenerate", a.degenerate == b.degenerate ? 0.0 : 1.0);
  if (a.degenerate || b.degenerate) return d;

  const std::size_t slots = std::max(a.quotient_dims.size(), b.quotient_dims.size());
  for (std::size_t k = 0; k < slots; ++k) {
    const double qa = k < a.quotient_dims.size() ? static_cast<double>(a.quotient_dims[k]) : 0.0;
    const double qb = k < b.quotient_dims.size() ? static_cast<double>(b.quotient_dims[k]) : 0.0;
    record("quotient_dims[" + std::to_string(k + 1) + "]", std::abs(qa - qb));
    const bool fa = k < a.full_hardy.size() && a.full_hardy[k];
    const bool fb = k < b.full_hardy.size() && b.full_hardy[k];
    record("full_hardy[" + std::to_string(k + 1) + "]", fa == fb ? 0.0 : 1.0);
  }
  const std::size_t pairs = std::min(a.pairs.size(), b.pairs.size());
  for (std::size_t p = 0; p < pairs; ++p) {
    const auto& sa = a.pairs[p].singular_values;
    const auto& sb = b.pairs[p].singular_values;
    double diff = 0.0;
    for (std::size_t k = 0; k < std::max(sa.size(), sb.size()); ++k) {
      const double va = k < sa.size() ? sa[k] : 0.0;
      const double vb = k < sb.size() ? sb[k] : 0.0;
      diff = std::max(diff, std::abs(va - vb));
    }
    std::ostringstream name;
    name << "commutator_singular_values(" << a.pairs[p].i + 1 << "," << a.pairs[p].j + 1 << ")";
    record(name.str(), diff);
  }
  if (a.wandering_dimension && b.wandering_dimension) {
    record("wandering_dimension",
           std::abs(static_cast<double>(*a.wandering_dimension) - static_cast<double>(*b.wandering_dimension)));
  }
  return d;
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Equivalent:
      return "EQUIVALENT";
    case Verdict::NotEquivalent:
      return "NOT_EQUIVALENT";
    case Verdict::Undecided:
      return "UNDECIDED_BY_PAPER";
  }
  return "UNKNOWN";
}

EquivalenceVerdict equivalence_verdict(const lattice::SubmoduleHandle& s1, const lattice::SubmoduleHandle& s2) {
  require_compatible(s1, s2);
  EquivalenceVerdict v;
  if (s1.is_degenerate() || s2.is_degenerate()) {
    v.note = "a degenerate submodule (no Inner slot) is outside the inner-function class";
    return v;
  }

  const bool full1 = s1.is_full_module();
  const bool full2 = s2.is_full_module();
  if (full1 || full2) {
    v.equality = equality_test(s1, s2);
    if (full1 && full2) {
      v.verdict = Verdict::Equivalent;
      v.note = "both submodules are the full module";
      return v;
    }
    const auto& proper = full1 ? s2 : s1;
    if (proper.inner_slots().size() < 2) {
      v.note = "a single inner generator b(z_k) H^2 is carried onto the full module by the unitary "
               "module map M_b, so the full-module rule does not apply";
      return v;
    }
    v.verdict = Verdict::NotEquivalent;
    v.certificate = compare_fingerprints(fingerprint(s1), fingerprint(s2));
    v.note = "a proper co-doubly commuting submodule is never equivalent to the full module";
    return v;
  }

  if (full_hardy_pattern(s1) != full_hardy_pattern(s2)) {
    v.note = "FullHardy slot patterns differ; rigidity needs every generator inner";
    return v;
  }
  if (s1.inner_slots().size() < 2) {
    v.note = "fewer than two inner slots: the submodules need not contain functions independent of "
             "each variable, and equivalence without equality is possible";
    return v;
  }

  v.equality = equality_test(s1, s2);
  if (v.equality->equal) {
    v.verdict = Verdict::Equivalent;
    v.note = "equal submodules";
    return v;
  }
  v.verdict = Verdict::NotEquivalent;
  FingerprintDifference diff = compare_fingerprints(fingerprint(s1), fingerprint(s2));
  if (diff.max_difference > v.certificate_threshold) v.certificate = std::move(diff);
  v.note = "unequal submodules with all generators inner are not unitarily equivalent";
  return v;
}

}  // namespace polyhardy::rigidity
