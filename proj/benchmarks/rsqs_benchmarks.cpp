#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "rsqs/bhtree.hpp"
#include "rsqs/dense_reference.hpp"
#include "rsqs/lattice.hpp"
#include "rsqs/potentials.hpp"
#include "rsqs/propagate.hpp"
#include "rsqs/rng.hpp"
#include "rsqs/spectral.hpp"

namespace {

rsqs::WaveFunction random_state(const rsqs::GridSpec& grid, std::uint64_t seed) {
  rsqs::CounterRng rng(seed);
  std::vector<rsqs::Complex> amps(grid.point_count());
  for (auto& z : amps) z = rsqs::Complex{rng.uniform() - 0.5, rng.uniform() - 0.5};
  return rsqs::normalize_discrete(rsqs::WaveFunction(grid, std::move(amps), rsqs::Representation::kPosition));
}

rsqs::Potential cosine_well() {
  return rsqs::Potential::callable(
      [](std::span<const double> x, double) {
        double s = 0.0;
        for (double xi : x) s += 1.0 - std::cos(2.0 * std::numbers::pi * xi);
        return s;
      },
      false);
}

void BM_Qsft(benchmark::State& state) {
  const int dim = static_cast<int>(state.range(0));
  const int n = static_cast<int>(state.range(1));
  const rsqs::GridSpec grid = rsqs::make_grid(1, dim, n);
  const rsqs::WaveFunction psi = random_state(grid, 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(rsqs::qsft(psi, rsqs::TransformDirection::kInverse));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(grid.point_count()));
}
BENCHMARK(BM_Qsft)->Args({1, 64})->Args({1, 1024})->Args({2, 64})->Args({3, 30});

void BM_SuzukiStep(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  const rsqs::GridSpec grid = rsqs::make_grid(1, 2, 64);
  const rsqs::WaveFunction psi = random_state(grid, 2);
  const rsqs::Potential v = cosine_well();
  for (auto _ : state) {
    benchmark::DoNotOptimize(rsqs::suzuki_step(psi, v, 0.0, 1e-3, k));
  }
}
BENCHMARK(BM_SuzukiStep)->DenseRange(1, 3);

void BM_DenseReference(benchmark::State& state) {
  const rsqs::GridSpec grid = rsqs::make_grid(1, 1, static_cast<int>(state.range(0)));
  const rsqs::WaveFunction psi = random_state(grid, 3);
  const rsqs::Potential v = cosine_well();
  for (auto _ : state) {
    benchmark::DoNotOptimize(rsqs::dense_reference_evolve(psi, v, 0.1));
  }
}
BENCHMARK(BM_DenseReference)->Arg(16)->Arg(64)->Arg(256);

void BM_BarnesHutEnergy(benchmark::State& state) {
  const int eta = static_cast<int>(state.range(0));
  const int d = 3;
  rsqs::CounterRng rng(4);
  std::vector<double> x(static_cast<std::size_t>(eta) * d);
  std::vector<double> q(static_cast<std::size_t>(eta));
  for (double& v : x) v = rng.uniform();
  for (double& v : q) v = rng.uniform() < 0.5 ? 1.0 : -1.0;
  const rsqs::BHTree tree = rsqs::bh_build(x, q, d, 0.05);
  for (auto _ : state) {
    benchmark::DoNotOptimize(tree.total_energy());
  }
}
BENCHMARK(BM_BarnesHutEnergy)->RangeMultiplier(4)->Range(64, 4096)->Unit(benchmark::kMillisecond);

void BM_DirectEnergy(benchmark::State& state) {
  const int eta = static_cast<int>(state.range(0));
  const int d = 3;
  rsqs::CounterRng rng(4);
  std::vector<double> x(static_cast<std::size_t>(eta) * d);
  std::vector<double> q(static_cast<std::size_t>(eta));
  for (double& v : x) v = rng.uniform();
  for (double& v : q) v = rng.uniform() < 0.5 ? 1.0 : -1.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(rsqs::modified_coulomb_direct(x, q, d, 0.05));
  }
}
BENCHMARK(BM_DirectEnergy)->RangeMultiplier(4)->Range(64, 4096)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
