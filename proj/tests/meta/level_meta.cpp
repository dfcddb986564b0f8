// Rejection rates of the goodness-of-fit drivers under their null models,
// over 100 master seeds at level 0.01. Each rate must lie in [0, 0.03].
#include <cstdio>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "mdnm/mdnm.hpp"

using namespace mdnm;

namespace {

constexpr std::size_t kSeeds = 100;
constexpr double kLevel = 0.01;
constexpr double kMaxRate = 0.03;

std::map<GenerationPair, double> as_map(const JointPmf& p) {
  std::map<GenerationPair, double> m;
  for (const auto& [k, q] : p.entries) m[{k.first, k.second}] = q;
  return m;
}

double exact_table_driver(std::uint64_t seed) {
  static const MotherDependentLaw law(OffspringLaw::critical_binary(), 2, 0.3);
  static const CountVector a{1, 0};
  static const auto table = as_map(exact_joint_pmf(law, a, 60));
  const std::size_t n = 20'000;
  std::vector<GenerationPair> draws(n);
  parallel_for(n, default_threads(), [&](std::size_t k) {
    Rng rng = make_stream(seed, k);
    draws[k] = to_generation_pair(sample_hitting(law, a, rng));
  });
  std::map<GenerationPair, std::size_t> obs;
  for (const auto& g : draws) ++obs[g];
  return chi_square_table(obs, table, n).p_value;
}

double tree_vs_walk_driver(std::uint64_t seed) {
  static const MotherDependentLaw law(
      OffspringLaw::from_pmf({{0, 0.4}, {1, 0.2}, {2, 0.3}, {3, 0.1}}), 3, 0.25);
  static const CountVector a{1, 1, 0};
  const std::size_t n = 10'000;
  SimulationCaps gen0;
  gen0.max_allelic_generation = 0;
  std::vector<GenerationPair> tree(n), walk(n);
  parallel_for(n, default_threads(), [&](std::size_t k) {
    Rng r1 = make_stream(seed, 2 * k), r2 = make_stream(seed, 2 * k + 1);
    tree[k] = extract_chain(simulate_forest(law, a, gen0, r1)).entries.at(0);
    walk[k] = to_generation_pair(sample_hitting(law, a, r2));
  });
  std::map<GenerationPair, std::size_t> ta, wa;
  for (std::size_t k = 0; k < n; ++k) {
    ++ta[tree[k]];
    ++wa[walk[k]];
  }
  return chi_square_homogeneity(ta, wa).p_value;
}

double markov_driver(std::uint64_t seed) {
  MotherDependentLaw law(OffspringLaw::critical_binary(), 2, 0.3);
  MarkovTestOptions options;
  options.threads = default_threads();
  return markov_transition_test(law, CountVector{1, 1}, 20'000, seed, options).test.p_value;
}

double lemma4_driver(std::uint64_t seed) {
  ScalingSetup s;
  s.n = 500;
  return run_lemma4_experiment(s, 2000, seed, default_threads()).ks_clones.p_value;
}

double offspring_sum_driver(std::uint64_t seed) {
  static const LimitParams p;
  static const TruncatedNuSampler sampler(p, 1e-6);
  std::vector<double> sums(1000);
  parallel_for(sums.size(), default_threads(), [&](std::size_t k) {
    Rng rng = make_stream(seed, k);
    for (double x : sample_csbp_offspring(sampler, 1.0, rng)) sums[k] += x;
  });
  IGParams law{1.0, p.c * p.c / p.sigma2};
  return ks_one_sample(sums, [&](double t) { return ig_cdf(law, t); }).p_value;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<double(std::uint64_t)>>> drivers = {
      {"exact_table", exact_table_driver},
      {"tree_vs_walk", tree_vs_walk_driver},
      {"markov", markov_driver},
      {"lemma4", lemma4_driver},
      {"offspring_sum", offspring_sum_driver},
  };
  bool ok = true;
  for (const auto& [name, driver] : drivers) {
    std::size_t rejections = 0;
    for (std::size_t s = 0; s < kSeeds; ++s) rejections += driver(10'000 + s) < kLevel;
    double rate = static_cast<double>(rejections) / kSeeds;
    bool pass = rate <= kMaxRate;
    ok = ok && pass;
    std::printf("%-4s %-14s rejection rate %.2f (%zu of %zu)\n", pass ? "PASS" : "FAIL",
                name.c_str(), rate, rejections, kSeeds);
    std::fflush(stdout);
  }
  return ok ? 0 : 1;
}
