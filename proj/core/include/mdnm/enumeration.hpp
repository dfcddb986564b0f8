// Brute-force laws for small instances, used as oracles.
#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <utility>

#include "mdnm/offspring_laws.hpp"
#include "mdnm/types.hpp"

namespace mdnm {

using JointLaw = std::map<std::pair<CountVector, CountVector>, double>;

// Exact P_a(T_0 = k, M_1 = l) for |k| <= max_total, by processing the
// generation-0 clones one at a time and branching over every offspring
// vector they can have. Identical partial states are merged. Throws
// TooLarge when max_total > 12.
JointLaw enumerate_joint_law(const MotherDependentLaw& law, std::span<const std::int64_t> a,
                             std::int64_t max_total);

// Size law of a single-type plane tree with offspring law mu, restricted to
// trees of at most max_nodes vertices, by listing every breadth-first child
// count sequence. Throws TooLarge when max_nodes > 25.
std::map<std::int64_t, double> enumerate_plane_tree_sizes(const OffspringLaw& law,
                                                          std::int64_t max_nodes);

}  // namespace mdnm
