#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <sstream>
#include <tuple>

#include "mdnm/allele_tree.hpp"
#include "mdnm/clone_mutant.hpp"
#include "mdnm/errors.hpp"
#include "mdnm/genealogy.hpp"
#include "mdnm/gof.hpp"
#include "test_support.hpp"

namespace mdnm {
namespace {

using test::law_of;

TEST(AlleleTree, NoMutationGivesSingleNode) {
  MotherDependentLaw law(OffspringLaw::critical_binary(), 2, 0.0);
  Rng rng = make_stream(31, 0);
  CountVector a{1, 0};
  SimulationCaps caps;
  caps.max_nodes = 100'000;
  for (int rep = 0; rep < 50; ++rep) {
    ColoredForest f;
    try {
      f = simulate_forest(law, a, caps, rng);
    } catch (const CapExceeded&) {
      continue;
    }
    auto t = build_allele_tree(f);
    ASSERT_EQ(t.nodes().size(), 1u);
    EXPECT_EQ(t.nodes()[0].record.size, static_cast<std::int64_t>(f.size()));
    EXPECT_TRUE(is_zero(t.nodes()[0].record.mutants));
  }
}

TEST(AlleleTree, HandEncodedForestMatchesGolden) {
  auto t = build_allele_tree(test::worked_forest());
  std::ostringstream os;
  write_allele_records(os, t);
  EXPECT_EQ(os.str(), test::read_file(test::fixture_path("worked_allele_tree.tsv")));

  std::vector<std::uint32_t> p33{3, 3};
  auto r33 = t.at(0, p33);
  EXPECT_EQ(r33.size, 2);
  EXPECT_EQ(r33.type, 2u);
  std::vector<std::uint32_t> missing{1, 1};
  EXPECT_TRUE(t.at(0, missing).is_padding());
  std::vector<std::uint32_t> beyond{9};
  EXPECT_TRUE(t.at(0, beyond).is_padding());
  for (const auto& n : t.nodes()) {
    EXPECT_EQ(n.record.mutants[n.record.type], 0);
    EXPECT_EQ(n.children.size(), static_cast<std::size_t>(total(n.record.mutants)));
  }
  std::ostringstream dot;
  write_allele_dot(dot, t);
  EXPECT_NE(dot.str().find("\"1:3\""), std::string::npos);
}

TEST(AlleleTree, MixedRootsNeedForestMode) {
  ForestBuilder b(2);
  std::vector<std::uint32_t> none;
  b.add_root(0);
  b.expand(none);
  b.add_root(1);
  b.expand(none);
  auto f = std::move(b).finish();
  EXPECT_THROW(build_allele_tree(f), MixedRootTypes);
  auto t = build_allele_forest(f);
  ASSERT_EQ(t.roots().size(), 2u);
  std::ostringstream os;
  write_allele_records(os, t);
  EXPECT_NE(os.str().find("r1\t1\t1\t0,0"), std::string::npos) << os.str();
  EXPECT_NE(os.str().find("r2\t1\t2\t0,0"), std::string::npos) << os.str();
}

TEST(AlleleTree, SameTypeRootsCollapse) {
  MotherDependentLaw law(law_of({{0, 0.5}, {1, 0.5}}), 2, 0.0);
  Rng rng = make_stream(32, 0);
  CountVector a{2, 0};
  auto f = simulate_forest(law, a, {}, rng);
  auto t = build_allele_forest(f);
  ASSERT_EQ(t.roots().size(), 1u);
  EXPECT_EQ(t.nodes()[t.roots()[0]].record.size, static_cast<std::int64_t>(f.size()));
}

// Depth-k sums of the allele tree reproduce the clone-mutant chain, and
// every node's subfamily size and mutants agree with the forest.
TEST(AlleleTree, LevelsAggregateToChain) {
  auto base = law_of({{0, 0.5}, {1, 0.2}, {2, 0.2}, {3, 0.1}});
  MotherDependentLaw law(base, 3, 0.35);
  Rng rng = make_stream(33, 0);
  SimulationCaps caps;
  caps.max_nodes = 100'000;
  CountVector a{2, 1, 0};
  int checked = 0;
  for (int rep = 0; rep < 500; ++rep) {
    ColoredForest f;
    try {
      f = simulate_forest(law, a, caps, rng);
    } catch (const CapExceeded&) {
      continue;
    }
    auto t = build_allele_forest(f);
    auto levels = aggregate_levels(t);
    auto chain = extract_chain(f);
    ASSERT_EQ(levels.size(), chain.entries.size());
    EXPECT_EQ(levels, chain.entries);
    std::int64_t root_sum = 0;
    for (auto r : t.roots()) root_sum += t.nodes()[r].record.size;
    EXPECT_EQ(root_sum, total(chain.entries[0].clones));
    ++checked;
  }
  EXPECT_GT(checked, 400);
}

TEST(AlleleTree, DepthLimit) {
  auto t = build_allele_tree(test::worked_forest(), 1);
  EXPECT_EQ(t.nodes().size(), 5u);
  auto t0 = build_allele_tree(test::worked_forest(), 0);
  EXPECT_EQ(t0.nodes().size(), 1u);
}

TEST(AlleleTree, CutForestNeedsShallowDepth) {
  auto base = law_of({{0, 0.3}, {2, 0.4}, {3, 0.3}});
  MotherDependentLaw law(base, 2, 0.5);
  Rng rng = make_stream(34, 0);
  SimulationCaps caps;
  caps.max_allelic_generation = 1;
  CountVector a{4, 0};
  for (int rep = 0; rep < 20; ++rep) {
    auto f = simulate_forest(law, a, caps, rng);
    if (f.complete()) continue;
    EXPECT_THROW(build_allele_tree(f), InvalidArgument);
    EXPECT_NO_THROW(build_allele_tree(f, 1));
    return;
  }
  FAIL() << "no cut forest produced";
}

TEST(AlleleTree, MutantBlocksOrdering) {
  auto f = test::worked_forest();
  auto subs = extract_subtrees(f, 0);
  std::vector<std::uint32_t> sizes(f.size(), 0);
  for (std::uint32_t t = 0; t < 3; ++t)
    for (const auto& s : extract_subtrees(f, t))
      for (auto u : s.members) sizes[u] = static_cast<std::uint32_t>(s.members.size());
  auto blocks = mutant_blocks(f, subs[0].members, sizes);
  ASSERT_EQ(blocks.size(), 3u);
  EXPECT_EQ(blocks[0].mother, 1u);
  EXPECT_EQ(blocks[0].subfamily_roots, (std::vector<NodeIndex>{4, 5}));
  EXPECT_EQ(blocks[1].mother, 0u);
  EXPECT_EQ(blocks[2].mother, 3u);
}

// The sketch sampler and the genealogy give the same law for the root
// record and the sorted depth-1 sizes.
TEST(AlleleSketch, AgreesWithGenealogyInLaw) {
  auto base = law_of({{0, 0.4}, {1, 0.2}, {2, 0.3}, {3, 0.1}});
  MotherDependentLaw law(base, 2, 0.3);
  CountVector a{2, 0};
  using Key = std::tuple<std::int64_t, std::int64_t, std::vector<std::int64_t>>;
  auto key = [](std::int64_t size, std::int64_t muts, std::vector<std::int64_t> kids) {
    std::sort(kids.rbegin(), kids.rend());
    if (kids.size() > 2) kids.resize(2);
    for (auto& k : kids) k = std::min<std::int64_t>(k, 4);
    return Key{std::min<std::int64_t>(size, 8), std::min<std::int64_t>(muts, 3), kids};
  };
  std::map<Key, std::size_t> from_sketch, from_forest;
  Rng r1 = make_stream(35, 0), r2 = make_stream(35, 1);
  SimulationCaps caps;
  caps.max_allelic_generation = 1;
  const int n = 40'000;
  for (int rep = 0; rep < n; ++rep) {
    auto s = sample_allele_sketch(law, a, 1, r1);
    std::vector<std::int64_t> kids;
    for (auto c : s.nodes[0].children) kids.push_back(s.nodes[c].record.size);
    ++from_sketch[key(s.nodes[0].record.size, total(s.nodes[0].record.mutants), kids)];

    auto t = build_allele_tree(simulate_forest(law, a, caps, r2), 1);
    const auto& root = t.nodes()[t.roots()[0]];
    kids.clear();
    for (auto c : root.children) kids.push_back(t.nodes()[c].record.size);
    ++from_forest[key(root.record.size, total(root.record.mutants), kids)];
  }
  EXPECT_GT(chi_square_homogeneity(from_sketch, from_forest).p_value, 0.01);
}

}  // namespace
}  // namespace mdnm
