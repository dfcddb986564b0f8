#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace mdnm {

// Per-type counts. Types are 0-based inside the library; record files and
// the command line use 1-based types.
using CountVector = std::vector<std::int64_t>;

inline std::int64_t total(std::span<const std::int64_t> v) {
  std::int64_t s = 0;
  for (auto x : v) s += x;
  return s;
}

inline CountVector unit_vector(std::size_t d, std::size_t i, std::int64_t k = 1) {
  CountVector v(d, 0);
  v[i] = k;
  return v;
}

inline void add_into(CountVector& acc, std::span<const std::int64_t> v) {
  for (std::size_t j = 0; j < v.size(); ++j) acc[j] += v[j];
}

inline bool is_zero(std::span<const std::int64_t> v) {
  for (auto x : v)
    if (x != 0) return false;
  return true;
}

// "a,b,c"
std::string join_counts(std::span<const std::int64_t> v, char sep = ',');

// Clone population and mutant children of one allelic generation:
// (T_k, M_{k+1}).
struct GenerationPair {
  CountVector clones;
  CountVector mutants;

  friend bool operator==(const GenerationPair&, const GenerationPair&) = default;
  friend auto operator<=>(const GenerationPair&, const GenerationPair&) = default;
};

}  // namespace mdnm
