// Clone-mutant chain (T_k, M_{k+1}) of a forest and a statistical check of
// its transition law.
#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "mdnm/genealogy.hpp"
#include "mdnm/gof.hpp"
#include "mdnm/offspring_laws.hpp"
#include "mdnm/types.hpp"

namespace mdnm {

struct CloneMutantChain {
  // M_0: root counts.
  CountVector initial;
  // entries[k] = (T_k, M_{k+1}) for k up to the last allelic generation
  // present; every later state is zero.
  std::vector<GenerationPair> entries;
  // False when the forest was cut at some allelic generation g; entries
  // beyond g are then absent.
  bool complete = true;
};

CloneMutantChain extract_chain(const ColoredForest& forest);

// M_0, M_1, ..., ending with the first zero vector.
std::vector<CountVector> mutant_process_view(const CloneMutantChain& chain);

// "k  T_k(1..d)  M_{k+1}(1..d)" per line.
void write_chain_records(std::ostream& os, const CloneMutantChain& chain);

struct MarkovTestOptions {
  // Initial population of the conditioned runs. Defaults to v.
  std::optional<CountVector> start;
  // The transition (T_{k-1}, M_k = v) -> (T_k, M_{k+1}) is examined at this k.
  std::uint32_t generation = 1;
  // Additionally condition on T_{k-1} = u.
  std::optional<CountVector> previous_clones;
  std::size_t min_events = 100;
  std::uint64_t max_nodes = 1'000'000;
  unsigned threads = 1;
};

struct MarkovTestReport {
  GofReport test;
  std::size_t conditioned = 0;
  std::size_t fresh = 0;
};

// Runs `replicas` forests from the start vector, keeps those with M_k = v,
// and compares their (T_k, M_{k+1}) with `replicas` fresh (T_0, M_1) draws
// started from v, by a two-sample chi-square test. Forests are only grown up
// to allelic generation k. Throws InsufficientData when fewer than
// min_events runs satisfy the condition.
MarkovTestReport markov_transition_test(const MotherDependentLaw& law, const CountVector& v,
                                        std::size_t replicas, std::uint64_t seed,
                                        const MarkovTestOptions& options = {});

}  // namespace mdnm
