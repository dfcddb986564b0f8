// Goodness-of-fit tests: Kolmogorov-Smirnov and Pearson chi-square.
#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <span>
#include <vector>

namespace mdnm {

struct GofReport {
  double statistic = 0.0;
  double p_value = 1.0;
  std::size_t sample_size = 0;
  // Sample points (KS) or cells after merging (chi-square).
  std::size_t cells = 0;
};

// P(K > lambda) for the Kolmogorov distribution.
double kolmogorov_survival(double lambda);

// Asymptotic p-value of a one-sample D statistic, with Stephens' small-sample
// correction of the scaling.
double ks_p_value(double d_statistic, double effective_n);

GofReport ks_one_sample(std::span<const double> samples, const std::function<double(double)>& cdf);
GofReport ks_two_sample(std::span<const double> a, std::span<const double> b);

// Upper tail of the chi-square law.
double chi_square_survival(double statistic, double dof);

struct ChiSquareCell {
  double observed = 0.0;
  double expected = 0.0;
};

// Cells with expected count below min_expected are pooled with `tail`
// (which may start empty); if the pooled cell is still below min_expected it
// is merged with the smallest remaining cell until it is not. Throws
// DegenerateTable when fewer than two cells remain.
GofReport chi_square_cells(std::vector<ChiSquareCell> cells, ChiSquareCell tail, std::size_t n,
                           double min_expected = 5.0);

// One-sample test of counts against probabilities. Observed keys absent
// from `expected`, and the probability mass not assigned to any key, go to
// the tail cell.
template <class Key>
GofReport chi_square_table(const std::map<Key, std::size_t>& observed,
                           const std::map<Key, double>& expected, std::size_t n) {
  std::vector<ChiSquareCell> cells;
  ChiSquareCell tail;
  double assigned = 0.0;
  for (const auto& [key, p] : expected) {
    auto it = observed.find(key);
    double obs = it == observed.end() ? 0.0 : static_cast<double>(it->second);
    cells.push_back({obs, p * static_cast<double>(n)});
    assigned += p;
  }
  for (const auto& [key, count] : observed)
    if (!expected.count(key)) tail.observed += static_cast<double>(count);
  tail.expected = std::max(0.0, 1.0 - assigned) * static_cast<double>(n);
  return chi_square_cells(std::move(cells), tail, n);
}

struct HomogeneityCell {
  double a = 0.0;
  double b = 0.0;
};

// Two-sample homogeneity test over the given cells (same merging rule,
// applied to the smaller of the two expected counts).
GofReport chi_square_homogeneity_cells(std::vector<HomogeneityCell> cells,
                                       double min_expected = 5.0);

template <class Key>
GofReport chi_square_homogeneity(const std::map<Key, std::size_t>& a,
                                 const std::map<Key, std::size_t>& b) {
  std::map<Key, HomogeneityCell> joined;
  for (const auto& [key, count] : a) joined[key].a = static_cast<double>(count);
  for (const auto& [key, count] : b) joined[key].b = static_cast<double>(count);
  std::vector<HomogeneityCell> cells;
  cells.reserve(joined.size());
  for (const auto& [key, cell] : joined) cells.push_back(cell);
  return chi_square_homogeneity_cells(std::move(cells));
}

// min(1, m p).
inline double bonferroni(double p, std::size_t tests) {
  double q = p * static_cast<double>(tests);
  return q < 1.0 ? q : 1.0;
}

}  // namespace mdnm
