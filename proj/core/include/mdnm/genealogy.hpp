// Colored genealogical forests: storage, simulation and the basic
// structural queries (level counts, same-type subtrees, mutant lines).
#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <ranges>
#include <span>
#include <vector>

#include "mdnm/offspring_laws.hpp"
#include "mdnm/random.hpp"
#include "mdnm/types.hpp"

namespace mdnm {

using NodeIndex = std::uint32_t;
inline constexpr NodeIndex kNoParent = std::numeric_limits<NodeIndex>::max();

struct NodeRecord {
  NodeIndex parent = kNoParent;
  NodeIndex first_child = 0;
  std::uint32_t child_count = 0;
  std::uint32_t type = 0;
  std::uint32_t level = 0;
  std::uint32_t allelic_generation = 0;
  std::uint32_t tree = 0;
  // False for frontier nodes whose offspring were never drawn.
  bool expanded = true;

  bool is_root() const { return parent == kNoParent; }
};

// Arena layout: trees one after another, each tree in breadth-first order,
// so the arena index is the global forest index and the children of a node
// occupy a contiguous index range.
class ColoredForest {
 public:
  ColoredForest() = default;
  explicit ColoredForest(std::size_t types) : d_(types) {}

  std::size_t types() const { return d_; }
  std::size_t size() const { return nodes_.size(); }
  std::size_t tree_count() const { return roots_.size(); }
  const NodeRecord& node(NodeIndex u) const { return nodes_[u]; }
  std::span<const NodeRecord> nodes() const { return nodes_; }
  std::span<const NodeIndex> roots() const { return roots_; }

  auto children(NodeIndex u) const {
    const auto& n = nodes_[u];
    return std::views::iota(n.first_child, n.first_child + n.child_count);
  }

  // Roots count as generation-0 mutants.
  bool is_mutant(NodeIndex u) const {
    const auto& n = nodes_[u];
    return n.is_root() || nodes_[n.parent].type != n.type;
  }

  // 1-based position of u in the breadth-first order of its own tree.
  std::uint32_t breadth_first_index(NodeIndex u) const {
    return u - roots_[nodes_[u].tree] + 1;
  }

  // Child ranks from the root down to u (empty for a root).
  std::vector<std::uint32_t> ulam_harris_label(NodeIndex u) const;

  CountVector offspring_vector(NodeIndex u) const;
  CountVector root_counts() const;
  // True when every node was expanded.
  bool complete() const { return frontier_ == 0; }
  std::size_t frontier_size() const { return frontier_; }

  // Rank of each node in depth-first preorder, trees taken in order. This is
  // the lexicographic Ulam-Harris order across the forest.
  std::vector<std::uint32_t> preorder_ranks() const;
  // Number of nodes in the subtree rooted at each node (itself included).
  std::vector<std::uint32_t> subtree_sizes() const;

 private:
  friend class ForestBuilder;

  std::size_t d_ = 0;
  std::vector<NodeRecord> nodes_;
  std::vector<NodeIndex> roots_;
  std::size_t frontier_ = 0;
};

// Grows a forest in arena order. Nodes must be expanded (or marked as
// frontier) strictly in arena order, and a tree must be finished before the
// next root is added.
class ForestBuilder {
 public:
  explicit ForestBuilder(std::size_t types);

  NodeIndex add_root(std::uint32_t type);
  // Next node awaiting expansion, or nullopt when the current tree is done.
  std::optional<NodeIndex> pending() const;
  void expand(std::span<const std::uint32_t> child_types);
  void leave_unexpanded();

  const NodeRecord& node(NodeIndex u) const { return forest_.nodes_[u]; }
  std::size_t size() const { return forest_.nodes_.size(); }
  void reserve(std::size_t n) { forest_.nodes_.reserve(n); }

  ColoredForest finish() &&;

 private:
  ColoredForest forest_;
  NodeIndex cursor_ = 0;
};

struct SimulationCaps {
  std::uint64_t max_nodes = 10'000'000;
  std::uint32_t max_levels = 100'000;
  // Nodes of a higher allelic generation are recorded but not expanded.
  std::optional<std::uint32_t> max_allelic_generation;
};

// initial(i) roots of type i, grouped by type ascending. Each child's type is
// drawn independently, so the plane order of siblings is exchangeable.
ColoredForest simulate_forest(const MotherDependentLaw& law, std::span<const std::int64_t> initial,
                              const SimulationCaps& caps, Rng& rng);

// Entry k is Y_k, the per-type node count at level k.
std::vector<CountVector> level_counts(const ColoredForest& forest);

struct SubtreeRef {
  NodeIndex root;
  std::uint32_t type;
  // Breadth-first order within the subtree.
  std::vector<NodeIndex> members;
};

// Maximal connected type-i subtrees, ordered by the Ulam-Harris order of
// their roots.
std::vector<SubtreeRef> extract_subtrees(const ColoredForest& forest, std::uint32_t type);

struct StoppingLine {
  std::vector<NodeIndex> members;
};

// Mutants of allelic generation n; the roots for n = 0.
StoppingLine mutant_line(const ColoredForest& forest, std::uint32_t n);

// No member is an ancestor of another.
bool is_antichain(const ColoredForest& forest, const StoppingLine& line);

}  // namespace mdnm
