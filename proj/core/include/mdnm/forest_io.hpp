// Record and graph exports for forests, plus the hand-encoded input mode.
#pragma once

#include <iosfwd>

#include "mdnm/genealogy.hpp"

namespace mdnm {

// Tab-separated records, one node per line in arena order:
//   id  parent(-1 for roots)  type(1-based)  level  allelic_generation  mutant(0/1)
// preceded by "# types <d>" and a column header comment.
void write_forest_records(std::ostream& os, const ColoredForest& forest);

// Reads the format above. Only the first three columns are required; when
// the remaining ones are present they must agree with the values implied by
// the parent links. Ids are arbitrary distinct nonnegative integers, parents
// may appear before or after their children, and children keep their file
// order. Throws ConfigError with the offending line.
ColoredForest read_forest_records(std::istream& is);

// Graph description with one edge per parent link and labels "type:size",
// size being the number of nodes in the subtree.
void write_forest_dot(std::ostream& os, const ColoredForest& forest);

}  // namespace mdnm
