#include "haarshift/distribution.hpp"
#include "haarshift/duality.hpp"
#include "haarshift/gaussian.hpp"
#include "haarshift/group.hpp"
#include "haarshift/heyde.hpp"
#include "haarshift/homomorphism.hpp"

#include <benchmark/benchmark.h>

namespace {

using namespace haarshift;

FiniteAbelianGroup group_for(std::int64_t order_code) {
  switch (order_code) {
    case 0:
      return FiniteAbelianGroup::make({9});
    case 1:
      return FiniteAbelianGroup::make({25});
    case 2:
      return FiniteAbelianGroup::make({3, 3});
    default:
      return FiniteAbelianGroup::make({5, 5});
  }
}

void bench_char_fn(benchmark::State& state) {
  const FiniteAbelianGroup g = group_for(state.range(0));
  const Distribution mu = random_distribution(g, 42, 6);
  for (auto _ : state) {
    benchmark::DoNotOptimize(char_fn(mu));
  }
}
BENCHMARK(bench_char_fn)->DenseRange(0, 3);

void bench_convolve(benchmark::State& state) {
  const FiniteAbelianGroup g = group_for(state.range(0));
  const Distribution mu = random_distribution(g, 42, 6);
  const Distribution nu = random_distribution(g, 43, 6);
  for (auto _ : state) {
    benchmark::DoNotOptimize(convolve(mu, nu));
  }
}
BENCHMARK(bench_convolve)->DenseRange(0, 3);

void bench_oracle_scan(benchmark::State& state) {
  const FiniteAbelianGroup g = group_for(state.range(0));
  const Homomorphism alpha = Homomorphism::scalar(g, 2);
  const HeydeInstance inst{g, alpha, random_distribution(g, 42, 6),
                           random_distribution(g, 43, 6)};
  for (auto _ : state) {
    benchmark::DoNotOptimize(conditional_symmetry_oracle(inst));
  }
}
BENCHMARK(bench_oracle_scan)->DenseRange(0, 3);

void bench_equation_scan(benchmark::State& state) {
  const FiniteAbelianGroup g = group_for(state.range(0));
  const Homomorphism alpha = Homomorphism::scalar(g, 2);
  const HeydeInstance inst{g, alpha, random_distribution(g, 42, 6),
                           random_distribution(g, 43, 6)};
  for (auto _ : state) {
    benchmark::DoNotOptimize(heyde_equation_holds(inst));
  }
}
BENCHMARK(bench_equation_scan)->DenseRange(0, 3);

void bench_subgroup_enumeration(benchmark::State& state) {
  const FiniteAbelianGroup g = group_for(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(enumerate_subgroups(g));
  }
}
BENCHMARK(bench_subgroup_enumeration)->DenseRange(0, 3);

void bench_automorphism_enumeration(benchmark::State& state) {
  const FiniteAbelianGroup g = group_for(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(enumerate_automorphisms(g, 4096));
  }
}
BENCHMARK(bench_automorphism_enumeration)->DenseRange(0, 3);

void bench_window_verify(benchmark::State& state) {
  const auto a1 = QuadraticGaussianSpec::make({{1, -1}, {-1, 2}});
  const auto a2 = QuadraticGaussianSpec::make({{1, 0}, {0, 1}});
  const auto at = LatticeAutomorphism::make({{Int(-1), Int(1)}, {Int(1), Int(-2)}});
  const int radius = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(window_verify(a1, a2, at, radius));
  }
}
BENCHMARK(bench_window_verify)->Arg(5)->Arg(10)->Arg(20);

}  // namespace

BENCHMARK_MAIN();
