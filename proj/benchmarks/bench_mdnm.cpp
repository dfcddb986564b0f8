#include <benchmark/benchmark.h>

#include "mdnm/mdnm.hpp"

using namespace mdnm;

namespace {

const MotherDependentLaw& binary_law() {
  static const MotherDependentLaw law(OffspringLaw::critical_binary(), 2, 0.3);
  return law;
}

// Mean 0.9, so forests stay small.
const MotherDependentLaw& subcritical_law() {
  static const MotherDependentLaw law(OffspringLaw::from_pmf({{0, 0.55}, {2, 0.45}}), 2, 0.3);
  return law;
}

void BM_SimulateForest(benchmark::State& state) {
  const CountVector a{state.range(0), 0};
  SimulationCaps caps;
  std::uint64_t k = 0;
  std::size_t nodes = 0;
  for (auto _ : state) {
    Rng rng = make_stream(1, k++);
    auto f = simulate_forest(subcritical_law(), a, caps, rng);
    nodes += f.size();
    benchmark::DoNotOptimize(f);
  }
  state.counters["nodes/s"] = benchmark::Counter(static_cast<double>(nodes), benchmark::Counter::kIsRate);
}
BENCHMARK(BM_SimulateForest)->Arg(10)->Arg(100)->Arg(1000);

void BM_AlleleTree(benchmark::State& state) {
  Rng rng = make_stream(2, 0);
  auto f = simulate_forest(subcritical_law(), CountVector{state.range(0), 0}, SimulationCaps{}, rng);
  for (auto _ : state) benchmark::DoNotOptimize(build_allele_tree(f));
  state.counters["nodes"] = static_cast<double>(f.size());
}
BENCHMARK(BM_AlleleTree)->Arg(100)->Arg(1000);

// Hitting time of n e_1 under r = 1/n: stepwise walk against generation blocks.
void hitting(benchmark::State& state, WalkSampling mode) {
  const std::int64_t n = state.range(0);
  MotherDependentLaw law(OffspringLaw::critical_binary(), 2, 1.0 / static_cast<double>(n));
  HittingOptions options;
  options.mode = mode;
  std::uint64_t k = 0;
  for (auto _ : state) {
    Rng rng = make_stream(3, k++);
    CountVector x(2, 0);
    benchmark::DoNotOptimize(sample_clone_walk(law, 0, n, rng, x, options));
  }
}
void BM_HittingStepwise(benchmark::State& state) { hitting(state, WalkSampling::stepwise); }
void BM_HittingBlocks(benchmark::State& state) { hitting(state, WalkSampling::generation_blocks); }
BENCHMARK(BM_HittingStepwise)->Arg(100)->Arg(500)->Arg(2000)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_HittingBlocks)->Arg(100)->Arg(500)->Arg(2000)->Unit(benchmark::kMicrosecond);

void BM_ExactJointPmf(benchmark::State& state) {
  const CountVector a{1, 1};
  for (auto _ : state) benchmark::DoNotOptimize(exact_joint_pmf(binary_law(), a, state.range(0)));
}
BENCHMARK(BM_ExactJointPmf)->Arg(10)->Arg(20)->Arg(40)->Unit(benchmark::kMillisecond);

void BM_CsbpOffspring(benchmark::State& state) {
  LimitParams p;
  TruncatedNuSampler sampler(p, 1.0 / static_cast<double>(state.range(0)));
  std::uint64_t k = 0;
  for (auto _ : state) {
    Rng rng = make_stream(4, k++);
    benchmark::DoNotOptimize(sample_csbp_offspring(sampler, 1.0, rng));
  }
}
BENCHMARK(BM_CsbpOffspring)->Arg(10'000)->Arg(1'000'000)->Unit(benchmark::kMicrosecond);

void BM_CsbpTree(benchmark::State& state) {
  LimitParams p;
  TruncatedNuSampler sampler(p, 1e-4);
  CSBPOptions options;
  options.depth = static_cast<std::uint32_t>(state.range(0));
  std::uint64_t k = 0;
  for (auto _ : state) {
    Rng rng = make_stream(5, k++);
    benchmark::DoNotOptimize(sample_tree_csbp(p, sampler, options, rng));
  }
}
BENCHMARK(BM_CsbpTree)->Arg(1)->Arg(2)->Arg(3)->Unit(benchmark::kMicrosecond);

void BM_NuTailQuadrature(benchmark::State& state) {
  LimitParams p;
  for (auto _ : state) benchmark::DoNotOptimize(nu_tail_quadrature(p, 0.1));
}
BENCHMARK(BM_NuTailQuadrature)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
