#include "mdnm/enumeration.hpp"

#include <functional>
#include <tuple>
#include <vector>

#include "mdnm/errors.hpp"

namespace mdnm {

JointLaw enumerate_joint_law(const MotherDependentLaw& law, std::span<const std::int64_t> a,
                             std::int64_t max_total) {
  if (max_total > 12) throw TooLarge("enumeration is limited to max_total <= 12");
  const std::size_t d = law.types();
  if (a.size() != d) throw InvalidArgument("initial vector has wrong length");
  if (total(a) < 1) throw InvalidArgument("initial population is empty");
  JointLaw out;
  if (total(a) > max_total) return out;

  std::vector<std::vector<std::pair<CountVector, double>>> support(d);
  for (std::size_t i = 0; i < d; ++i) support[i] = law.offspring_support(i);

  // (pending clones, T_0 so far, M_1 so far)
  using State = std::tuple<CountVector, CountVector, CountVector>;
  std::map<State, double> current{{State{CountVector(a.begin(), a.end()),
                                         CountVector(a.begin(), a.end()), CountVector(d, 0)},
                                   1.0}};
  while (!current.empty()) {
    std::map<State, double> next;
    for (const auto& [state, p] : current) {
      const auto& [pending, clones, mutants] = state;
      std::size_t i = 0;
      while (i < d && pending[i] == 0) ++i;
      if (i == d) {
        out[{clones, mutants}] += p;
        continue;
      }
      for (const auto& [v, q] : support[i]) {
        if (total(clones) + v[i] > max_total) continue;
        State s = state;
        auto& [np, nc, nm] = s;
        np[i] += v[i] - 1;
        nc[i] += v[i];
        for (std::size_t j = 0; j < d; ++j)
          if (j != i) nm[j] += v[j];
        next[s] += p * q;
      }
    }
    current = std::move(next);
  }
  return out;
}

std::map<std::int64_t, double> enumerate_plane_tree_sizes(const OffspringLaw& law,
                                                          std::int64_t max_nodes) {
  if (max_nodes > 25) throw TooLarge("plane tree enumeration is limited to 25 nodes");
  std::map<std::int64_t, double> out;
  // Breadth-first child counts c_1..c_s; the tree is complete when the
  // number of discovered but unvisited vertices first reaches 0.
  std::function<void(std::int64_t, std::int64_t, double)> rec = [&](std::int64_t visited,
                                                                    std::int64_t open,
                                                                    double prob) {
    if (open == 0) {
      out[visited] += prob;
      return;
    }
    for (const auto& atom : law.atoms()) {
      if (visited + open + atom.count > max_nodes) continue;
      rec(visited + 1, open - 1 + atom.count, prob * atom.probability);
    }
  };
  if (max_nodes >= 1) rec(0, 1, 1.0);
  return out;
}

}  // namespace mdnm
