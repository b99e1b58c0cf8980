#pragma once

#include <optional>
#include <vector>

#include "oracles.hpp"
#include "polyhardy/lattice.hpp"

namespace fixture {

using oracle::Complex;
using oracle::Index;
using oracle::SlotData;

inline SlotData inner(std::vector<Complex> zeros, Complex gamma = 1.0) { return {true, std::move(zeros), gamma}; }
inline SlotData full() { return {false, {}, 1.0}; }
inline SlotData z_power(Index m) { return inner(std::vector<Complex>(static_cast<std::size_t>(m), 0.0)); }

inline polyhardy::lattice::PolydiscScenario scenario(const std::vector<SlotData>& slots,
                                                     const std::vector<Index>& degrees) {
  std::vector<polyhardy::lattice::DiscFactor> factors;
  std::vector<std::optional<Index>> overrides;
  for (std::size_t k = 0; k < slots.size(); ++k) {
    factors.push_back(slots[k].inner
                          ? polyhardy::lattice::DiscFactor::inner(polyhardy::disc::BlaschkeProduct(slots[k].zeros, slots[k].gamma))
                          : polyhardy::lattice::DiscFactor::full_hardy());
    overrides.push_back(k < degrees.size() ? std::optional<Index>(degrees[k]) : std::nullopt);
  }
  return polyhardy::lattice::PolydiscScenario::make(std::move(factors), overrides);
}

inline polyhardy::lattice::SubmoduleHandle handle(const std::vector<SlotData>& slots, const std::vector<Index>& degrees) {
  return polyhardy::lattice::submodule_projection(scenario(slots, degrees));
}

inline double theta0_defect(const SlotData& s) {
  return 1.0 - std::norm(oracle::blaschke(s.zeros, s.gamma, 0.0));
}

}  // namespace fixture
