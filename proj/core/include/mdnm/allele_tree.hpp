// Multitype allele trees: subfamily sizes, types and mutant-child vectors
// indexed by Ulam-Harris paths.
#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "mdnm/coding_walks.hpp"
#include "mdnm/genealogy.hpp"
#include "mdnm/types.hpp"

namespace mdnm {

struct AlleleRecord {
  // A_u: subfamily size. Zero marks a padding record.
  std::int64_t size = 0;
  // C_u, 0-based. Meaningless for padding.
  std::uint32_t type = 0;
  // d_u: mutant children of the subfamily, by type.
  CountVector mutants;

  bool is_padding() const { return size == 0; }
};

class AlleleTree {
 public:
  struct Node {
    // Index into roots(); paths are relative to that root.
    std::size_t root = 0;
    std::vector<std::uint32_t> path;
    AlleleRecord record;
    std::size_t parent = SIZE_MAX;
    std::vector<std::size_t> children;
    // Some member of the subfamily in the source forest.
    NodeIndex representative = 0;
  };

  std::span<const Node> nodes() const { return nodes_; }
  std::span<const std::size_t> roots() const { return roots_; }
  std::size_t types() const { return d_; }
  // True when the tree came from build_allele_forest.
  bool is_forest() const { return forest_mode_; }

  // Record at `path` below root `root`; a padding record when absent.
  AlleleRecord at(std::size_t root, std::span<const std::uint32_t> path) const;
  // "r", "r.1.2" for a single tree; "r<type>", "r<type>.1" for forests.
  std::string path_string(const Node& node) const;

 private:
  friend AlleleTree build_allele(const ColoredForest&, bool, std::optional<std::uint32_t>);

  std::size_t d_ = 0;
  bool forest_mode_ = false;
  std::vector<Node> nodes_;
  std::vector<std::size_t> roots_;
  std::map<std::pair<std::size_t, std::vector<std::uint32_t>>, std::size_t> index_;
};

// One mother's contribution to the children of an allele node: her mutant
// children, which root the child subfamilies, in final order.
struct MutantBlock {
  NodeIndex mother;
  std::vector<NodeIndex> subfamily_roots;
};

// Blocks for the subfamily (or collapsed root group) with the given
// members. Mothers are ranked by number of mutant children, descending,
// ties broken by forest index; inside a block children are ordered by type
// ascending, then subfamily size descending, then forest index.
std::vector<MutantBlock> mutant_blocks(const ColoredForest& forest,
                                       std::span<const NodeIndex> members,
                                       std::span<const std::uint32_t> subfamily_size);

// Root record (T_0(j), j, M_1) for a forest whose roots share type j.
// Throws MixedRootTypes otherwise. With max_depth set, only allele nodes of
// depth <= max_depth are built; a forest cut at some allelic generation g
// requires max_depth <= g.
AlleleTree build_allele_tree(const ColoredForest& forest,
                             std::optional<std::uint32_t> max_depth = std::nullopt);

// One root per type present among the forest roots, collapsing the
// generation-0 individuals of that type.
AlleleTree build_allele_forest(const ColoredForest& forest,
                               std::optional<std::uint32_t> max_depth = std::nullopt);

// (T_k, M_{k+1}) summed over allele nodes of depth k.
std::vector<GenerationPair> aggregate_levels(const AlleleTree& tree);

// "path  A  C  d(1),...,d(d)" in breadth-first order, types 1-based.
void write_allele_records(std::ostream& os, const AlleleTree& tree);
// Graph description with labels "C:A".
void write_allele_dot(std::ostream& os, const AlleleTree& tree);

// Depth-limited allele levels sampled without building the genealogy:
// the root is (T_0, M_1) from `initial` through the walk sampler, and every
// mutant child independently starts a single-individual (T_0, M_1) of its
// type. Children are listed by decreasing size, then type; this is not the
// mother-block order of build_allele_tree, which needs the genealogy.
struct AlleleSketch {
  struct Node {
    std::size_t parent = SIZE_MAX;
    std::uint32_t depth = 0;
    AlleleRecord record;
    std::vector<std::size_t> children;
  };
  std::vector<Node> nodes;
};

AlleleSketch sample_allele_sketch(const MotherDependentLaw& law, std::span<const std::int64_t> initial,
                                  std::uint32_t depth, Rng& rng,
                                  const HittingOptions& options = {});

}  // namespace mdnm
