#include "mdnm/genealogy.hpp"

#include <algorithm>
#include <deque>

#include "mdnm/errors.hpp"

namespace mdnm {

std::vector<std::uint32_t> ColoredForest::ulam_harris_label(NodeIndex u) const {
  std::vector<std::uint32_t> label;
  while (!nodes_[u].is_root()) {
    NodeIndex p = nodes_[u].parent;
    label.push_back(u - nodes_[p].first_child + 1);
    u = p;
  }
  std::reverse(label.begin(), label.end());
  return label;
}

CountVector ColoredForest::offspring_vector(NodeIndex u) const {
  CountVector v(d_, 0);
  for (NodeIndex c : children(u)) ++v[nodes_[c].type];
  return v;
}

CountVector ColoredForest::root_counts() const {
  CountVector v(d_, 0);
  for (NodeIndex r : roots_) ++v[nodes_[r].type];
  return v;
}

std::vector<std::uint32_t> ColoredForest::preorder_ranks() const {
  std::vector<std::uint32_t> rank(nodes_.size(), 0);
  std::vector<NodeIndex> stack;
  std::uint32_t next = 0;
  for (NodeIndex r : roots_) {
    stack.push_back(r);
    while (!stack.empty()) {
      NodeIndex u = stack.back();
      stack.pop_back();
      rank[u] = next++;
      const auto& n = nodes_[u];
      for (std::uint32_t k = n.child_count; k > 0; --k) stack.push_back(n.first_child + k - 1);
    }
  }
  return rank;
}

std::vector<std::uint32_t> ColoredForest::subtree_sizes() const {
  std::vector<std::uint32_t> size(nodes_.size(), 1);
  for (std::size_t u = nodes_.size(); u-- > 0;)
    if (!nodes_[u].is_root()) size[nodes_[u].parent] += size[u];
  return size;
}

ForestBuilder::ForestBuilder(std::size_t types) : forest_(types) {
  if (types < 2) throw InvalidArgument("number of types must be at least 2");
}

NodeIndex ForestBuilder::add_root(std::uint32_t type) {
  if (pending()) throw InvalidArgument("previous tree is not finished");
  if (type >= forest_.d_) throw InvalidArgument("root type out of range");
  auto u = static_cast<NodeIndex>(forest_.nodes_.size());
  NodeRecord rec;
  rec.type = type;
  rec.tree = static_cast<std::uint32_t>(forest_.roots_.size());
  forest_.nodes_.push_back(rec);
  forest_.roots_.push_back(u);
  return u;
}

std::optional<NodeIndex> ForestBuilder::pending() const {
  if (cursor_ < forest_.nodes_.size()) return cursor_;
  return std::nullopt;
}

void ForestBuilder::expand(std::span<const std::uint32_t> child_types) {
  if (!pending()) throw InvalidArgument("no node awaiting expansion");
  NodeIndex u = cursor_++;
  auto& nodes = forest_.nodes_;
  const auto first = static_cast<NodeIndex>(nodes.size());
  const NodeRecord parent = nodes[u];
  nodes[u].first_child = first;
  nodes[u].child_count = static_cast<std::uint32_t>(child_types.size());
  for (std::uint32_t t : child_types) {
    if (t >= forest_.d_) throw InvalidArgument("child type out of range");
    NodeRecord rec;
    rec.parent = u;
    rec.type = t;
    rec.level = parent.level + 1;
    rec.allelic_generation = parent.allelic_generation + (t != parent.type ? 1 : 0);
    rec.tree = parent.tree;
    nodes.push_back(rec);
  }
}

void ForestBuilder::leave_unexpanded() {
  if (!pending()) throw InvalidArgument("no node awaiting expansion");
  NodeIndex u = cursor_++;
  forest_.nodes_[u].expanded = false;
  forest_.nodes_[u].first_child = static_cast<NodeIndex>(forest_.nodes_.size());
  ++forest_.frontier_;
}

ColoredForest ForestBuilder::finish() && {
  if (pending()) throw InvalidArgument("forest has unexpanded nodes pending");
  return std::move(forest_);
}

ColoredForest simulate_forest(const MotherDependentLaw& law, std::span<const std::int64_t> initial,
                              const SimulationCaps& caps, Rng& rng) {
  const std::size_t d = law.types();
  if (initial.size() != d) throw InvalidArgument("initial vector has wrong length");
  std::int64_t roots = 0;
  for (auto a : initial) {
    if (a < 0) throw InvalidArgument("initial counts must be nonnegative");
    roots += a;
  }
  if (roots < 1) throw InvalidArgument("initial population is empty");
  if (caps.max_nodes == 0 || caps.max_levels == 0) throw InvalidArgument("caps must be positive");
  if (static_cast<std::uint64_t>(roots) > caps.max_nodes)
    throw CapExceeded(CapExceeded::Kind::nodes, caps.max_nodes);

  ForestBuilder builder(d);
  std::vector<std::uint32_t> child_types;
  for (std::uint32_t type = 0; type < d; ++type) {
    for (std::int64_t k = 0; k < initial[type]; ++k) {
      builder.add_root(type);
      while (auto u = builder.pending()) {
        const NodeRecord& n = builder.node(*u);
        if (caps.max_allelic_generation && n.allelic_generation > *caps.max_allelic_generation) {
          builder.leave_unexpanded();
          continue;
        }
        std::int64_t total = law.base().sample(rng);
        if (total > 0) {
          if (n.level + 1 >= caps.max_levels)
            throw CapExceeded(CapExceeded::Kind::levels, caps.max_levels);
          if (builder.size() + static_cast<std::uint64_t>(total) > caps.max_nodes)
            throw CapExceeded(CapExceeded::Kind::nodes, caps.max_nodes);
        }
        child_types.clear();
        for (std::int64_t c = 0; c < total; ++c)
          child_types.push_back(static_cast<std::uint32_t>(law.sample_child_type(n.type, rng)));
        builder.expand(child_types);
      }
    }
  }
  return std::move(builder).finish();
}

std::vector<CountVector> level_counts(const ColoredForest& forest) {
  std::vector<CountVector> y;
  for (const auto& n : forest.nodes()) {
    if (n.level >= y.size()) y.resize(n.level + 1, CountVector(forest.types(), 0));
    ++y[n.level][n.type];
  }
  return y;
}

std::vector<SubtreeRef> extract_subtrees(const ColoredForest& forest, std::uint32_t type) {
  if (type >= forest.types()) throw InvalidArgument("type index out of range");
  std::vector<SubtreeRef> out;
  for (NodeIndex u = 0; u < forest.size(); ++u) {
    const auto& n = forest.node(u);
    if (n.type == type && forest.is_mutant(u)) out.push_back({u, type, {}});
  }
  auto rank = forest.preorder_ranks();
  std::sort(out.begin(), out.end(),
            [&](const SubtreeRef& a, const SubtreeRef& b) { return rank[a.root] < rank[b.root]; });
  std::deque<NodeIndex> queue;
  for (auto& s : out) {
    queue.push_back(s.root);
    while (!queue.empty()) {
      NodeIndex u = queue.front();
      queue.pop_front();
      s.members.push_back(u);
      for (NodeIndex c : forest.children(u))
        if (forest.node(c).type == type) queue.push_back(c);
    }
  }
  return out;
}

StoppingLine mutant_line(const ColoredForest& forest, std::uint32_t n) {
  StoppingLine line;
  for (NodeIndex u = 0; u < forest.size(); ++u)
    if (forest.node(u).allelic_generation == n && forest.is_mutant(u)) line.members.push_back(u);
  return line;
}

bool is_antichain(const ColoredForest& forest, const StoppingLine& line) {
  std::vector<char> member(forest.size(), 0);
  for (NodeIndex u : line.members) {
    if (member[u]) return false;
    member[u] = 1;
  }
  for (NodeIndex u : line.members) {
    for (NodeIndex p = forest.node(u).parent; p != kNoParent; p = forest.node(p).parent)
      if (member[p]) return false;
  }
  return true;
}

}  // namespace mdnm
