#include <benchmark/benchmark.h>

#include "qxor/bias.hpp"
#include "qxor/osn.hpp"

using namespace qxor;

namespace {

SolverBudget small_budget() {
  SolverBudget b;
  b.restarts = 2;
  b.max_sweeps = 200;
  b.seed = 1;
  return b;
}

}  // namespace

static void BM_Eigh(benchmark::State& state) {
  mat::Rng rng = mat::make_stream(1, 0);
  const HermitianMatrix g = mat::random_gue(state.range(0), rng);
  for (auto _ : state) benchmark::DoNotOptimize(mat::eigh(g));
}
BENCHMARK(BM_Eigh)->Arg(4)->Arg(16)->Arg(64);

static void BM_SplitNorm(benchmark::State& state) {
  mat::Rng rng = mat::make_stream(2, 0);
  std::vector<ComplexMatrix> items;
  for (Index k = 0; k < state.range(0); ++k) items.push_back(mat::random_ginibre(3, 3, rng));
  const osn::MatrixTuple t(items);
  for (auto _ : state) benchmark::DoNotOptimize(osn::rplus2c_norm(t));
}
BENCHMARK(BM_SplitNorm)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

static void BM_AmplifiedTranspose(benchmark::State& state) {
  const auto u = associated_map(swap_operator(2));
  for (auto _ : state) benchmark::DoNotOptimize(osn::amplified_search(u, state.range(0), small_budget()));
}
BENCHMARK(BM_AmplifiedTranspose)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

static void BM_BetaEntangled(benchmark::State& state) {
  const QuantumXorGame g = random_game(2, 2, 3);
  const Index d = state.range(0);
  for (auto _ : state) benchmark::DoNotOptimize(bias::beta_entangled(g, d, d, small_budget()));
}
BENCHMARK(BM_BetaEntangled)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

static void BM_BetaOwc(benchmark::State& state) {
  const QuantumXorGame g = random_game(2, 2, 4);
  for (auto _ : state) benchmark::DoNotOptimize(bias::beta_owc(g, state.range(0), small_budget()));
}
BENCHMARK(BM_BetaOwc)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

static void BM_Pietsch(benchmark::State& state) {
  mat::Rng rng = mat::make_stream(5, 0);
  const ComplexMatrix h = mat::random_ginibre(state.range(0), state.range(0), rng);
  for (auto _ : state) benchmark::DoNotOptimize(osn::pietsch_pi2(h));
}
BENCHMARK(BM_Pietsch)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
