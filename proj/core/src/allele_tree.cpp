#include "mdnm/allele_tree.hpp"

#include <algorithm>
#include <deque>
#include <ostream>

#include "mdnm/errors.hpp"

namespace mdnm {

AlleleRecord AlleleTree::at(std::size_t root, std::span<const std::uint32_t> path) const {
  auto it = index_.find({root, std::vector<std::uint32_t>(path.begin(), path.end())});
  if (it == index_.end()) return {0, 0, CountVector(d_, 0)};
  return nodes_[it->second].record;
}

std::string AlleleTree::path_string(const Node& node) const {
  std::string s = "r";
  if (forest_mode_) s += std::to_string(nodes_[roots_[node.root]].record.type + 1);
  for (auto k : node.path) s += "." + std::to_string(k);
  return s;
}

std::vector<MutantBlock> mutant_blocks(const ColoredForest& forest,
                                       std::span<const NodeIndex> members,
                                       std::span<const std::uint32_t> subfamily_size) {
  std::vector<MutantBlock> blocks;
  for (NodeIndex m : members) {
    const auto type = forest.node(m).type;
    MutantBlock block{m, {}};
    for (NodeIndex c : forest.children(m))
      if (forest.node(c).type != type) block.subfamily_roots.push_back(c);
    if (block.subfamily_roots.empty()) continue;
    std::sort(block.subfamily_roots.begin(), block.subfamily_roots.end(),
              [&](NodeIndex x, NodeIndex y) {
                const auto tx = forest.node(x).type, ty = forest.node(y).type;
                if (tx != ty) return tx < ty;
                if (subfamily_size[x] != subfamily_size[y])
                  return subfamily_size[x] > subfamily_size[y];
                return x < y;
              });
    blocks.push_back(std::move(block));
  }
  std::sort(blocks.begin(), blocks.end(), [](const MutantBlock& x, const MutantBlock& y) {
    if (x.subfamily_roots.size() != y.subfamily_roots.size())
      return x.subfamily_roots.size() > y.subfamily_roots.size();
    return x.mother < y.mother;
  });
  return blocks;
}

AlleleTree build_allele(const ColoredForest& forest, bool forest_mode,
                        std::optional<std::uint32_t> max_depth) {
  const std::size_t d = forest.types();
  const std::size_t n = forest.size();
  if (!forest.complete()) {
    std::uint32_t cut = UINT32_MAX;
    for (const auto& rec : forest.nodes())
      if (!rec.expanded) cut = std::min(cut, rec.allelic_generation);
    if (!max_depth || *max_depth >= cut)
      throw InvalidArgument("forest was cut at allelic generation " + std::to_string(cut) +
                            "; allele depth must stay below it");
  }

  // Subfamilies: each mutant (roots included) starts one.
  std::vector<std::uint32_t> family(n);
  std::vector<std::vector<NodeIndex>> members;
  for (NodeIndex u = 0; u < n; ++u) {
    if (forest.is_mutant(u)) {
      family[u] = static_cast<std::uint32_t>(members.size());
      members.emplace_back();
    } else {
      family[u] = family[forest.node(u).parent];
    }
    members[family[u]].push_back(u);
  }
  std::vector<std::uint32_t> family_size(n);
  for (NodeIndex u = 0; u < n; ++u)
    family_size[u] = static_cast<std::uint32_t>(members[family[u]].size());

  AlleleTree tree;
  tree.d_ = d;
  tree.forest_mode_ = forest_mode;

  auto make_node = [&](std::size_t root, std::vector<std::uint32_t> path, std::size_t parent,
                       std::span<const NodeIndex> group) {
    AlleleTree::Node node;
    node.root = root;
    node.path = std::move(path);
    node.parent = parent;
    node.representative = group.front();
    node.record.size = static_cast<std::int64_t>(group.size());
    node.record.type = forest.node(group.front()).type;
    node.record.mutants.assign(d, 0);
    for (NodeIndex m : group)
      for (NodeIndex c : forest.children(m))
        if (forest.node(c).type != node.record.type) ++node.record.mutants[forest.node(c).type];
    std::size_t id = tree.nodes_.size();
    tree.index_[{node.root, node.path}] = id;
    tree.nodes_.push_back(std::move(node));
    return id;
  };

  // Root groups: generation-0 individuals, per type.
  std::vector<std::vector<NodeIndex>> groups;
  if (!forest_mode) {
    std::uint32_t type = forest.node(forest.roots().front()).type;
    for (NodeIndex r : forest.roots())
      if (forest.node(r).type != type) throw MixedRootTypes();
    groups.emplace_back();
    for (NodeIndex u = 0; u < n; ++u)
      if (forest.node(u).allelic_generation == 0) groups.back().push_back(u);
  } else {
    std::vector<std::vector<NodeIndex>> by_type(d);
    for (NodeIndex u = 0; u < n; ++u)
      if (forest.node(u).allelic_generation == 0) by_type[forest.node(u).type].push_back(u);
    for (auto& g : by_type)
      if (!g.empty()) groups.push_back(std::move(g));
  }

  std::vector<std::vector<NodeIndex>> node_members;
  std::deque<std::size_t> queue;
  for (auto& g : groups) {
    std::size_t id = make_node(tree.roots_.size(), {}, SIZE_MAX, g);
    tree.roots_.push_back(id);
    node_members.push_back(std::move(g));
    queue.push_back(id);
  }
  while (!queue.empty()) {
    std::size_t id = queue.front();
    queue.pop_front();
    if (max_depth && tree.nodes_[id].path.size() >= *max_depth) continue;
    auto blocks = mutant_blocks(forest, node_members[id], family_size);
    std::uint32_t rank = 0;
    for (const auto& block : blocks) {
      for (NodeIndex c : block.subfamily_roots) {
        auto path = tree.nodes_[id].path;
        path.push_back(++rank);
        const auto& group = members[family[c]];
        std::size_t child = make_node(tree.nodes_[id].root, std::move(path), id, group);
        tree.nodes_[id].children.push_back(child);
        node_members.push_back(group);
        queue.push_back(child);
      }
    }
  }
  return tree;
}

AlleleTree build_allele_tree(const ColoredForest& forest, std::optional<std::uint32_t> max_depth) {
  return build_allele(forest, false, max_depth);
}

AlleleTree build_allele_forest(const ColoredForest& forest,
                               std::optional<std::uint32_t> max_depth) {
  return build_allele(forest, true, max_depth);
}

std::vector<GenerationPair> aggregate_levels(const AlleleTree& tree) {
  const std::size_t d = tree.types();
  std::vector<GenerationPair> out;
  for (const auto& node : tree.nodes()) {
    std::size_t k = node.path.size();
    if (k >= out.size()) out.resize(k + 1, {CountVector(d, 0), CountVector(d, 0)});
    out[k].clones[node.record.type] += node.record.size;
    add_into(out[k].mutants, node.record.mutants);
  }
  return out;
}

void write_allele_records(std::ostream& os, const AlleleTree& tree) {
  os << "# path\tsize\ttype\tmutants\n";
  for (const auto& node : tree.nodes())
    os << tree.path_string(node) << '\t' << node.record.size << '\t' << node.record.type + 1
       << '\t' << join_counts(node.record.mutants) << '\n';
}

void write_allele_dot(std::ostream& os, const AlleleTree& tree) {
  os << "digraph allele_tree {\n";
  auto nodes = tree.nodes();
  for (std::size_t k = 0; k < nodes.size(); ++k)
    os << "  a" << k << " [label=\"" << nodes[k].record.type + 1 << ':' << nodes[k].record.size
       << "\"];\n";
  for (std::size_t k = 0; k < nodes.size(); ++k)
    for (std::size_t c : nodes[k].children) os << "  a" << k << " -> a" << c << ";\n";
  os << "}\n";
}

AlleleSketch sample_allele_sketch(const MotherDependentLaw& law, std::span<const std::int64_t> initial,
                                  std::uint32_t depth, Rng& rng, const HittingOptions& options) {
  const std::size_t d = law.types();
  if (initial.size() != d) throw InvalidArgument("initial vector has wrong length");
  std::optional<std::uint32_t> type;
  for (std::size_t j = 0; j < d; ++j) {
    if (initial[j] < 0) throw InvalidArgument("initial counts must be nonnegative");
    if (initial[j] == 0) continue;
    if (type) throw MixedRootTypes();
    type = static_cast<std::uint32_t>(j);
  }
  if (!type) throw InvalidArgument("initial population is empty");

  AlleleSketch sketch;
  AlleleSketch::Node root;
  root.record.type = *type;
  root.record.mutants.assign(d, 0);
  root.record.size =
      sample_clone_walk(law, *type, initial[*type], rng, root.record.mutants, options);
  sketch.nodes.push_back(std::move(root));
  for (std::size_t id = 0; id < sketch.nodes.size(); ++id) {
    if (sketch.nodes[id].depth >= depth) continue;
    const CountVector mutants = sketch.nodes[id].record.mutants;
    std::vector<AlleleSketch::Node> kids;
    for (std::uint32_t i = 0; i < d; ++i) {
      for (std::int64_t m = 0; m < mutants[i]; ++m) {
        AlleleSketch::Node child;
        child.parent = id;
        child.depth = sketch.nodes[id].depth + 1;
        child.record.type = i;
        child.record.mutants.assign(d, 0);
        child.record.size = sample_clone_walk(law, i, 1, rng, child.record.mutants, options);
        kids.push_back(std::move(child));
      }
    }
    std::stable_sort(kids.begin(), kids.end(), [](const auto& x, const auto& y) {
      if (x.record.size != y.record.size) return x.record.size > y.record.size;
      return x.record.type < y.record.type;
    });
    for (auto& k : kids) {
      sketch.nodes[id].children.push_back(sketch.nodes.size());
      sketch.nodes.push_back(std::move(k));
    }
  }
  return sketch;
}

}  // namespace mdnm
