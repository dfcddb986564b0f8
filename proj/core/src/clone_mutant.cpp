#include "mdnm/clone_mutant.hpp"

#include <map>
#include <ostream>

#include "mdnm/errors.hpp"
#include "mdnm/parallel.hpp"

namespace mdnm {

CloneMutantChain extract_chain(const ColoredForest& forest) {
  const std::size_t d = forest.types();
  CloneMutantChain chain;
  chain.initial = forest.root_counts();
  chain.complete = forest.complete();
  std::uint32_t cut = UINT32_MAX;
  for (const auto& n : forest.nodes())
    if (!n.expanded) cut = std::min(cut, n.allelic_generation);
  for (NodeIndex u = 0; u < forest.size(); ++u) {
    const auto& n = forest.node(u);
    std::uint32_t g = n.allelic_generation;
    if (g < cut) {
      if (g >= chain.entries.size())
        chain.entries.resize(g + 1, {CountVector(d, 0), CountVector(d, 0)});
      ++chain.entries[g].clones[n.type];
    }
    if (g >= 1 && g - 1 < cut && !n.is_root() && forest.is_mutant(u)) {
      if (g - 1 >= chain.entries.size())
        chain.entries.resize(g, {CountVector(d, 0), CountVector(d, 0)});
      ++chain.entries[g - 1].mutants[n.type];
    }
  }
  return chain;
}

std::vector<CountVector> mutant_process_view(const CloneMutantChain& chain) {
  std::vector<CountVector> m{chain.initial};
  for (const auto& e : chain.entries) {
    m.push_back(e.mutants);
    if (is_zero(e.mutants)) break;
  }
  return m;
}

void write_chain_records(std::ostream& os, const CloneMutantChain& chain) {
  const std::size_t d = chain.initial.size();
  os << "# k";
  for (std::size_t j = 0; j < d; ++j) os << "\tT" << j + 1;
  for (std::size_t j = 0; j < d; ++j) os << "\tM" << j + 1;
  os << '\n';
  for (std::size_t k = 0; k < chain.entries.size(); ++k) {
    os << k;
    for (auto x : chain.entries[k].clones) os << '\t' << x;
    for (auto x : chain.entries[k].mutants) os << '\t' << x;
    os << '\n';
  }
}

MarkovTestReport markov_transition_test(const MotherDependentLaw& law, const CountVector& v,
                                        std::size_t replicas, std::uint64_t seed,
                                        const MarkovTestOptions& options) {
  const std::size_t d = law.types();
  if (v.size() != d) throw InvalidArgument("conditioning vector has wrong length");
  if (options.generation < 1) throw InvalidArgument("transition generation must be >= 1");
  MarkovTestReport report;
  if (is_zero(v)) {
    // Both laws are the point mass at (0, 0).
    report.test = {0.0, 1.0, replicas, 1};
    return report;
  }
  const CountVector start = options.start.value_or(v);
  const std::uint32_t k = options.generation;

  std::vector<std::optional<GenerationPair>> conditioned(replicas);
  std::vector<std::optional<GenerationPair>> fresh(replicas);
  parallel_for(replicas, options.threads, [&](std::size_t rep) {
    SimulationCaps caps;
    caps.max_nodes = options.max_nodes;
    caps.max_allelic_generation = k;
    Rng rng = make_stream(seed, 2 * rep);
    try {
      auto chain = extract_chain(simulate_forest(law, start, caps, rng));
      auto state = [&](std::size_t g) {
        return g < chain.entries.size() ? chain.entries[g]
                                         : GenerationPair{CountVector(d, 0), CountVector(d, 0)};
      };
      GenerationPair prev = state(k - 1);
      if (prev.mutants == v &&
          (!options.previous_clones || prev.clones == *options.previous_clones))
        conditioned[rep] = state(k);
    } catch (const CapExceeded&) {
    }
    Rng rng2 = make_stream(seed, 2 * rep + 1);
    caps.max_allelic_generation = 0;
    try {
      auto chain = extract_chain(simulate_forest(law, v, caps, rng2));
      fresh[rep] = chain.entries.at(0);
    } catch (const CapExceeded&) {
    }
  });

  std::map<GenerationPair, std::size_t> a, b;
  for (const auto& c : conditioned)
    if (c) {
      ++a[*c];
      ++report.conditioned;
    }
  for (const auto& f : fresh)
    if (f) {
      ++b[*f];
      ++report.fresh;
    }
  if (report.conditioned < options.min_events)
    throw InsufficientData("conditioning event occurred " + std::to_string(report.conditioned) +
                           " times");
  report.test = chi_square_homogeneity(a, b);
  return report;
}

}  // namespace mdnm
