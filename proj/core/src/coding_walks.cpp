#include "mdnm/coding_walks.hpp"

#include <algorithm>
#include <ostream>

#include "mdnm/errors.hpp"

namespace mdnm {

WalkPath walk_from_subforest(const ColoredForest& forest, std::uint32_t type) {
  const std::size_t d = forest.types();
  auto subtrees = extract_subtrees(forest, type);
  std::stable_partition(subtrees.begin(), subtrees.end(),
                        [&](const SubtreeRef& s) { return forest.node(s.root).is_root(); });
  // Root subtrees must follow root order, which preorder already gives.
  WalkPath walk;
  walk.type = type;
  std::int64_t a = 0;
  for (NodeIndex r : forest.roots())
    if (forest.node(r).type == type) ++a;
  CountVector s = unit_vector(d, type, a);
  walk.positions.push_back(s);
  for (const auto& sub : subtrees) {
    for (NodeIndex u : sub.members) {
      if (!forest.node(u).expanded) {
        walk.truncated = true;
        return walk;
      }
      for (NodeIndex c : forest.children(u)) ++s[forest.node(c).type];
      --s[type];
      walk.positions.push_back(s);
    }
  }
  return walk;
}

std::optional<std::size_t> first_hitting_time(const WalkPath& walk, std::int64_t level) {
  for (std::size_t k = 0; k < walk.positions.size(); ++k)
    if (walk.positions[k][walk.type] == -level) return k;
  return std::nullopt;
}

GenerationPair to_generation_pair(const HittingRecord& record) {
  const std::size_t d = record.tau0.size();
  GenerationPair g{record.tau0, CountVector(d, 0)};
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j)
      if (j != i) g.mutants[j] += record.mutant_totals[i][j];
  return g;
}

HittingRecord hitting_from_forest(const ColoredForest& forest) {
  const std::size_t d = forest.types();
  HittingRecord rec{CountVector(d, 0), std::vector<CountVector>(d, CountVector(d, 0))};
  for (std::uint32_t i = 0; i < d; ++i) {
    WalkPath walk = walk_from_subforest(forest, i);
    auto tau = first_hitting_time(walk, 0);
    if (!tau) throw InvalidArgument("walk does not reach 0; forest truncated too early");
    rec.tau0[i] = static_cast<std::int64_t>(*tau);
    rec.mutant_totals[i] = walk.positions[*tau];
    rec.mutant_totals[i][i] = 0;
  }
  return rec;
}

std::int64_t sample_clone_walk(const MotherDependentLaw& law, std::uint32_t type,
                               std::int64_t start, Rng& rng, CountVector& mutants,
                               const HittingOptions& options) {
  const std::size_t d = law.types();
  const std::size_t i = type;
  const auto cap = options.max_steps;
  std::uint64_t steps = 0;
  std::int64_t height = start;
  if (options.mode == WalkSampling::stepwise) {
    while (height > 0) {
      if (++steps > cap) throw CapExceeded(CapExceeded::Kind::steps, cap);
      CountVector v = law.sample(i, rng);
      height += v[i] - 1;
      for (std::size_t j = 0; j < d; ++j)
        if (j != i) mutants[j] += v[j];
    }
  } else {
    while (height > 0) {
      steps += static_cast<std::uint64_t>(height);
      if (steps > cap) throw CapExceeded(CapExceeded::Kind::steps, cap);
      std::int64_t children = law.base().sample_sum(height, rng);
      CountVector v = law.split_children(i, children, rng);
      height = v[i];
      for (std::size_t j = 0; j < d; ++j)
        if (j != i) mutants[j] += v[j];
    }
  }
  return static_cast<std::int64_t>(steps);
}

HittingRecord sample_hitting(const MotherDependentLaw& law, std::span<const std::int64_t> a,
                             Rng& rng, const HittingOptions& options) {
  const std::size_t d = law.types();
  if (a.size() != d) throw InvalidArgument("initial vector has wrong length");
  for (auto x : a)
    if (x < 0) throw InvalidArgument("initial counts must be nonnegative");
  if (total(a) < 1) throw InvalidArgument("initial population is empty");
  HittingRecord rec{CountVector(d, 0), std::vector<CountVector>(d, CountVector(d, 0))};
  for (std::size_t i = 0; i < d; ++i)
    if (a[i] > 0)
      rec.tau0[i] = sample_clone_walk(law, static_cast<std::uint32_t>(i), a[i], rng,
                                      rec.mutant_totals[i], options);
  return rec;
}

WalkTail sample_walk_tail(const MotherDependentLaw& law, std::uint32_t type, std::int64_t start,
                          std::size_t extra_steps, Rng& rng, std::uint64_t max_steps) {
  const std::size_t d = law.types();
  if (type >= d) throw InvalidArgument("type index out of range");
  if (start < 1) throw InvalidArgument("walk must start above 0");
  WalkTail tail{0, CountVector(d, 0), {}};
  std::int64_t height = start;
  std::uint64_t steps = 0;
  while (height > 0) {
    if (++steps > max_steps) throw CapExceeded(CapExceeded::Kind::steps, max_steps);
    CountVector v = law.sample(type, rng);
    height += v[type] - 1;
    for (std::size_t j = 0; j < d; ++j)
      if (j != type) tail.mutants[j] += v[j];
  }
  tail.tau0 = static_cast<std::int64_t>(steps);
  for (std::size_t k = 0; k < extra_steps; ++k) {
    CountVector v = law.sample(type, rng);
    v[type] -= 1;
    tail.increments.push_back(std::move(v));
  }
  return tail;
}

void write_walk_records(std::ostream& os, const WalkPath& walk) {
  os << "# step";
  if (!walk.positions.empty())
    for (std::size_t j = 0; j < walk.positions[0].size(); ++j) os << "\tS" << j + 1;
  os << '\n';
  for (std::size_t k = 0; k < walk.positions.size(); ++k) {
    os << k;
    for (auto x : walk.positions[k]) os << '\t' << x;
    os << '\n';
  }
}

}  // namespace mdnm
