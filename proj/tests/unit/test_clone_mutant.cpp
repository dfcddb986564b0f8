#include <gtest/gtest.h>

#include <sstream>

#include "mdnm/clone_mutant.hpp"
#include "mdnm/errors.hpp"
#include "mdnm/genealogy.hpp"
#include "test_support.hpp"

namespace mdnm {
namespace {

using test::law_of;

TEST(CloneMutantChain, SingleTypeTree) {
  // Root with three children, two of which have a child each, one of which
  // has one more: seven nodes of type 1.
  ForestBuilder b(3);
  b.add_root(0);
  std::vector<std::uint32_t> three{0, 0, 0}, one{0}, none;
  b.expand(three);
  b.expand(one);
  b.expand(one);
  b.expand(none);
  b.expand(one);
  b.expand(none);
  b.expand(none);
  auto f = std::move(b).finish();
  ASSERT_EQ(f.size(), 7u);
  auto chain = extract_chain(f);
  ASSERT_EQ(chain.entries.size(), 1u);
  EXPECT_EQ(chain.entries[0].clones, (CountVector{7, 0, 0}));
  EXPECT_EQ(chain.entries[0].mutants, (CountVector{0, 0, 0}));
  EXPECT_EQ(mutant_process_view(chain),
            (std::vector<CountVector>{{1, 0, 0}, {0, 0, 0}}));
}

TEST(CloneMutantChain, HandEncodedForest) {
  auto chain = extract_chain(test::worked_forest());
  EXPECT_EQ(chain.initial, (CountVector{1, 0, 0}));
  std::vector<GenerationPair> expected{{{3, 0, 0}, {0, 3, 1}},
                                       {{0, 6, 1}, {2, 0, 2}},
                                       {{3, 0, 5}, {0, 1, 0}},
                                       {{0, 1, 0}, {0, 0, 0}}};
  EXPECT_EQ(chain.entries, expected);
  EXPECT_TRUE(chain.complete);
  auto view = mutant_process_view(chain);
  EXPECT_EQ(view.size(), 5u);
  EXPECT_EQ(view[1], (CountVector{0, 3, 1}));
  EXPECT_TRUE(is_zero(view.back()));
  std::ostringstream os;
  write_chain_records(os, chain);
  EXPECT_NE(os.str().find("1\t0\t6\t1\t2\t0\t2"), std::string::npos) << os.str();
}

TEST(CloneMutantChain, PathwiseInvariants) {
  auto base = law_of({{0, 0.4}, {1, 0.2}, {2, 0.25}, {3, 0.15}});
  MotherDependentLaw law(base, 3, 0.3);
  Rng rng = make_stream(21, 0);
  SimulationCaps caps;
  caps.max_nodes = 100'000;
  for (std::size_t i = 0; i < 3; ++i) {
    CountVector a = unit_vector(3, i, 2);
    for (int rep = 0; rep < 200; ++rep) {
      ColoredForest f;
      try {
        f = simulate_forest(law, a, caps, rng);
      } catch (const CapExceeded&) {
        continue;
      }
      auto chain = extract_chain(f);
      std::int64_t sum = 0;
      CountVector prev = chain.initial;
      for (const auto& e : chain.entries) {
        sum += total(e.clones);
        for (std::size_t j = 0; j < 3; ++j) EXPECT_GE(e.clones[j], prev[j]);
        prev = e.mutants;
      }
      EXPECT_EQ(static_cast<std::size_t>(sum), f.size());
      EXPECT_EQ(chain.entries[0].mutants[i], 0);
    }
  }
}

TEST(CloneMutantChain, NoMutation) {
  MotherDependentLaw law(OffspringLaw::critical_binary(), 2, 0.0);
  Rng rng = make_stream(22, 0);
  CountVector a{0, 3};
  SimulationCaps caps;
  caps.max_nodes = 100'000;
  for (int rep = 0; rep < 100; ++rep) {
    ColoredForest f;
    try {
      f = simulate_forest(law, a, caps, rng);
    } catch (const CapExceeded&) {
      continue;
    }
    auto view = mutant_process_view(extract_chain(f));
    EXPECT_EQ(view, (std::vector<CountVector>{{0, 3}, {0, 0}}));
  }
}

TEST(CloneMutantChain, CutForestIsIncomplete) {
  auto base = law_of({{0, 0.3}, {2, 0.4}, {3, 0.3}});
  MotherDependentLaw law(base, 2, 0.5);
  Rng rng = make_stream(23, 0);
  SimulationCaps caps;
  caps.max_allelic_generation = 1;
  CountVector a{5, 0};
  auto f = simulate_forest(law, a, caps, rng);
  auto chain = extract_chain(f);
  if (!f.complete()) {
    EXPECT_FALSE(chain.complete);
    EXPECT_LE(chain.entries.size(), 2u);
  }
}

TEST(MarkovTest, ZeroStateIsTrivial) {
  MotherDependentLaw law(OffspringLaw::critical_binary(), 2, 0.3);
  auto r = markov_transition_test(law, CountVector{0, 0}, 10, 1);
  EXPECT_EQ(r.test.p_value, 1.0);
}

TEST(MarkovTest, TransitionMatchesFreshStart) {
  MotherDependentLaw law(OffspringLaw::critical_binary(), 2, 0.3);
  MarkovTestOptions opts;
  auto r = markov_transition_test(law, CountVector{1, 1}, 100'000, 24, opts);
  EXPECT_GT(r.conditioned, 1000u);
  EXPECT_GT(r.test.p_value, 0.01);
}

TEST(MarkovTest, ConditioningOnPreviousClones) {
  MotherDependentLaw law(OffspringLaw::critical_binary(), 2, 0.3);
  MarkovTestOptions opts;
  opts.start = CountVector{1, 0};
  opts.previous_clones = CountVector{2, 0};
  auto r = markov_transition_test(law, CountVector{0, 1}, 100'000, 25, opts);
  EXPECT_GT(r.conditioned, 1000u);
  EXPECT_GT(r.test.p_value, 0.01);
}

TEST(MarkovTest, TwoMutantsOfOneType) {
  MotherDependentLaw law(OffspringLaw::critical_binary(), 2, 0.3);
  MarkovTestOptions opts;
  opts.start = CountVector{1, 0};
  auto r = markov_transition_test(law, CountVector{0, 2}, 100'000, 26, opts);
  EXPECT_GT(r.conditioned, 1000u);
  EXPECT_GT(r.test.p_value, 0.01);
}

TEST(MarkovTest, TooFewEvents) {
  MotherDependentLaw law(OffspringLaw::critical_binary(), 2, 0.3);
  MarkovTestOptions opts;
  opts.start = CountVector{1, 0};
  EXPECT_THROW(markov_transition_test(law, CountVector{0, 9}, 200, 28, opts), InsufficientData);
}

}  // namespace
}  // namespace mdnm
