#pragma once

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

#include "mdnm/forest_io.hpp"
#include "mdnm/offspring_laws.hpp"

namespace mdnm::test {

inline std::string fixture_path(const std::string& name) {
  return std::string(MDNM_FIXTURE_DIR) + "/" + name;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline ColoredForest worked_forest() {
  std::ifstream in(fixture_path("worked_forest.tsv"));
  return read_forest_records(in);
}

// |observed/n - p| within k binomial standard deviations.
inline bool within_binomial_sigma(double observed, double n, double p, double k = 3.0) {
  double sd = std::sqrt(p * (1.0 - p) / n);
  return std::abs(observed / n - p) <= k * sd;
}

inline OffspringLaw law_of(std::initializer_list<OffspringLaw::Atom> atoms) {
  return OffspringLaw::from_pmf(std::vector<OffspringLaw::Atom>(atoms));
}

}  // namespace mdnm::test
