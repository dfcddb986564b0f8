// Verification drivers shared by the command-line tool.
#pragma once

#include <cstdint>
#include <vector>

#include "mdnm/offspring_laws.hpp"
#include "mdnm/types.hpp"

namespace mdnm {

// Every nonempty support inside {0, 1, 2, 3}, each with a flat pmf and,
// when it has two or more points, a pmf proportional to 1, 2, 3, ...
std::vector<OffspringLaw> small_support_laws();

// Initial vectors with |a| in {1, 2} for d types.
std::vector<CountVector> small_initial_vectors(std::size_t d);

struct OracleCheckReport {
  std::size_t cases = 0;
  double max_abs_difference = 0.0;
  std::int64_t max_total = 0;
};

// exact_joint_pmf against enumerate_joint_law over small_support_laws x
// d in {2, 3} x r in {0, 0.25, 0.5, 1} x small_initial_vectors, entries with
// |k| <= max_total.
OracleCheckReport check_exact_against_enumeration(std::int64_t max_total);

}  // namespace mdnm
