#include <benchmark/benchmark.h>

#include <complex>
#include <optional>
#include <vector>

#include "polyhardy/blh.hpp"
#include "polyhardy/commutator.hpp"
#include "polyhardy/disc.hpp"
#include "polyhardy/lattice.hpp"
#include "polyhardy/rigidity.hpp"

namespace {

namespace disc = polyhardy::disc;
namespace lat = polyhardy::lattice;
using Complex = std::complex<double>;
using polyhardy::numeric::Index;

lat::PolydiscScenario inner_scenario(Index n, Index degree) {
  const std::vector<std::vector<Complex>> zeros{{0.5, Complex(0.1, -0.3)}, {-0.3}, {Complex(0.0, 0.25)}};
  std::vector<lat::DiscFactor> factors;
  std::vector<std::optional<Index>> overrides;
  for (Index k = 0; k < n; ++k) {
    factors.push_back(lat::DiscFactor::inner(disc::BlaschkeProduct(zeros[static_cast<std::size_t>(k) % zeros.size()])));
    overrides.emplace_back(degree);
  }
  return lat::PolydiscScenario::make(std::move(factors), overrides);
}

void BM_ModelSpace(benchmark::State& state) {
  const disc::BlaschkeProduct b({0.5, Complex(0.2, 0.4), -0.6});
  for (auto _ : state) benchmark::DoNotOptimize(disc::model_space(b, state.range(0)));
}
BENCHMARK(BM_ModelSpace)->Arg(32)->Arg(128)->Arg(512);

void BM_RankOneCompression(benchmark::State& state) {
  const disc::BlaschkeProduct b({0.5, Complex(0.2, 0.4), -0.6});
  for (auto _ : state) benchmark::DoNotOptimize(disc::rank_one_compression(b, state.range(0)));
}
BENCHMARK(BM_RankOneCompression)->Arg(32)->Arg(128);

void BM_SubmoduleProjection(benchmark::State& state) {
  const auto s = inner_scenario(state.range(0), state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(lat::submodule_projection(s));
}
BENCHMARK(BM_SubmoduleProjection)->Args({2, 16})->Args({2, 32})->Args({3, 12});

void BM_StructuralCommutator(benchmark::State& state) {
  const auto h = lat::submodule_projection(inner_scenario(state.range(0), state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(polyhardy::commutator::cross_commutator_structural(h, 0, 1));
}
BENCHMARK(BM_StructuralCommutator)->Args({2, 32})->Args({3, 12});

void BM_CommutatorReport(benchmark::State& state) {
  const auto h = lat::submodule_projection(inner_scenario(2, state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(polyhardy::commutator::commutator_report(h, 0, 1));
}
BENCHMARK(BM_CommutatorReport)->Arg(12)->Arg(20)->Unit(benchmark::kMillisecond);

void BM_BlhSymbol(benchmark::State& state) {
  const auto s = inner_scenario(2, state.range(0));
  for (auto _ : state) {
    const auto sym = polyhardy::blh::build_blh_symbol(s);
    benchmark::DoNotOptimize(polyhardy::blh::verify_inner(sym));
  }
}
BENCHMARK(BM_BlhSymbol)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_Fingerprint(benchmark::State& state) {
  const auto h = lat::submodule_projection(inner_scenario(2, state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(polyhardy::rigidity::fingerprint(h));
}
BENCHMARK(BM_Fingerprint)->Arg(12)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
