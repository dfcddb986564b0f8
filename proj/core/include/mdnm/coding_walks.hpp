// Random-walk coding of same-type subforests and the tree-free sampler of
// (T_0, M_1) built on it.
#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "mdnm/genealogy.hpp"
#include "mdnm/offspring_laws.hpp"
#include "mdnm/random.hpp"
#include "mdnm/types.hpp"

namespace mdnm {

struct WalkPath {
  std::uint32_t type = 0;
  // positions[k] = S_k; positions[0] = a(i) e_i.
  std::vector<CountVector> positions;
  // Set when the walk reached a node whose offspring were never drawn.
  bool truncated = false;

  std::size_t length() const { return positions.empty() ? 0 : positions.size() - 1; }
};

// Visits the type-i subforest: first the subtrees of the type-i roots in
// root order, then the remaining type-i subtrees in Ulam-Harris order of
// their roots, each subtree breadth-first. With this order the first hitting
// time of 0 equals the number of generation-0 type-i nodes.
WalkPath walk_from_subforest(const ColoredForest& forest, std::uint32_t type);

// First k with S_k(type) = -level.
std::optional<std::size_t> first_hitting_time(const WalkPath& walk, std::int64_t level = 0);

struct HittingRecord {
  CountVector tau0;
  // mutant_totals[i] = X_0^i, with a zero diagonal entry.
  std::vector<CountVector> mutant_totals;
};

// (T_0, M_1) with M_1(j) = sum_{i != j} X_0^i(j).
GenerationPair to_generation_pair(const HittingRecord& record);

// Hitting record read off a forest through walk_from_subforest.
HittingRecord hitting_from_forest(const ColoredForest& forest);

enum class WalkSampling {
  // One offspring vector per step.
  stepwise,
  // The type-i coordinate moves down by at most one per step, so from
  // height h it cannot reach 0 in fewer than h steps. The next h steps are
  // drawn together: their total offspring is a sum of h draws from mu and
  // the split into types is a single multinomial. Same law for (tau_0, X_0)
  // as the stepwise walk at a fraction of the cost.
  generation_blocks,
};

struct HittingOptions {
  std::uint64_t max_steps = 100'000'000;
  WalkSampling mode = WalkSampling::generation_blocks;
};

// Throws CapExceeded{steps} when some tau_0(i) would exceed max_steps.
HittingRecord sample_hitting(const MotherDependentLaw& law, std::span<const std::int64_t> a,
                             Rng& rng, const HittingOptions& options = {});

// Single-type walk from `start`: returns tau_0 and adds X_0 to `mutants`.
std::int64_t sample_clone_walk(const MotherDependentLaw& law, std::uint32_t type,
                               std::int64_t start, Rng& rng, CountVector& mutants,
                               const HittingOptions& options = {});

struct WalkTail {
  std::int64_t tau0 = 0;
  CountVector mutants;
  // Increments xi - e_i of the steps following tau_0.
  std::vector<CountVector> increments;
};

// Stepwise walk for a single type started at `start`, continued for
// `extra_steps` after the hitting time.
WalkTail sample_walk_tail(const MotherDependentLaw& law, std::uint32_t type, std::int64_t start,
                          std::size_t extra_steps, Rng& rng,
                          std::uint64_t max_steps = 100'000'000);

// "step  S(1) ... S(d)" per line.
void write_walk_records(std::ostream& os, const WalkPath& walk);

}  // namespace mdnm
