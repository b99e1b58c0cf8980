#pragma once
//
// Equality and unitary-equivalence verdicts for co-doubly commuting submodules.
//

#include <optional>
#include <string>
#include <vector>

#include "polyhardy/lattice.hpp"

namespace polyhardy::rigidity {

using numeric::Index;

inline constexpr double kEqualTol = 1e-7;
inline constexpr double kCertificateTol = 1e-6;

struct EqualityResult {
  double distance = 0.0;  // ||P_S1 - P_S2||
  double threshold = kEqualTol;
  bool equal = false;
};

// Throws ContractError unless both handles share n and truncations.
EqualityResult equality_test(const lattice::SubmoduleHandle& s1, const lattice::SubmoduleHandle& s2);

struct PairSpectrum {
  Index i = 0;
  Index j = 0;
  std::vector<double> singular_values;  // non-increasing, above rel_tol * sigma_max
};

struct Fingerprint {
  bool degenerate = false;
  std::vector<PairSpectrum> pairs;
  std::vector<Index> quotient_dims;  // per slot
  std::vector<bool> full_hardy;      // per slot
  // dim of S (-) z_1 S on the interior window; empty when too large to build.
  std::optional<Index> wandering_dimension;
  double rel_tol = numeric::kDefaultRankTol;
};

Fingerprint fingerprint(const lattice::SubmoduleHandle& s, double rel_tol = numeric::kDefaultRankTol);

struct FingerprintDifference {
  double max_difference = 0.0;
  std::vector<std::string> differing_fields;  // fields that differ by more than the tolerance
};

FingerprintDifference compare_fingerprints(const Fingerprint& a, const Fingerprint& b,
                                           double tol = kCertificateTol);

enum class Verdict { Equivalent, NotEquivalent, Undecided };
std::string to_string(Verdict v);

struct EquivalenceVerdict {
  Verdict verdict = Verdict::Undecided;
  std::optional<EqualityResult> equality;
  std::optional<FingerprintDifference> certificate;
  double equal_threshold = kEqualTol;
  double certificate_threshold = kCertificateTol;
  std::string note;
};

EquivalenceVerdict equivalence_verdict(const lattice::SubmoduleHandle& s1, const lattice::SubmoduleHandle& s2);

}  // namespace polyhardy::rigidity
