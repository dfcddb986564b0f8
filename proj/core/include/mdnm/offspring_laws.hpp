// Base offspring law and the mother-dependent d-type law built on it.
#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "mdnm/random.hpp"
#include "mdnm/types.hpp"

namespace mdnm {

class OffspringLaw {
 public:
  struct Atom {
    std::int64_t count;
    double probability;
  };

  // Atoms with zero probability are dropped. Throws InvalidArgument on
  // negative counts, duplicated counts, probabilities outside [0, 1] or a
  // total differing from 1 by more than 1e-12. The pmf is renormalised.
  static OffspringLaw from_pmf(std::vector<Atom> atoms);

  // P(k) = (1 - p)^k p, truncated once the remaining tail is below
  // tail_mass, then renormalised.
  static OffspringLaw geometric(double p, double tail_mass = 1e-12);
  static OffspringLaw poisson(double mean, double tail_mass = 1e-12);
  // mu(0) = mu(2) = 1/2.
  static OffspringLaw critical_binary();

  std::span<const Atom> atoms() const { return atoms_; }
  double pmf(std::int64_t n) const;
  double mean() const { return mean_; }
  double variance() const { return variance_; }
  std::int64_t max_count() const { return atoms_.back().count; }

  // mu(0) + mu(1) < 1. Laws failing this are allowed (the degenerate
  // mu(0) = 1 case is useful in tests) but make most results trivial.
  bool nontrivial() const;

  // Generating function and its derivative. Defined for every real s
  // since the support is finite.
  double pgf(double s) const;
  double pgf_derivative(double s) const;

  std::int64_t sample(Rng& rng) const;
  // Total offspring of `copies` independent individuals.
  std::int64_t sample_sum(std::int64_t copies, Rng& rng) const;

 private:
  OffspringLaw() = default;
  void finalize();

  std::vector<Atom> atoms_;
  std::vector<double> cumulative_;
  double mean_ = 0.0;
  double variance_ = 0.0;
};

// An individual of type i has N ~ mu children; each child independently
// keeps type i with probability 1 - r, otherwise takes a type drawn
// uniformly from the other d - 1 types.
class MotherDependentLaw {
 public:
  MotherDependentLaw(OffspringLaw base, std::size_t types, double r);

  const OffspringLaw& base() const { return base_; }
  std::size_t types() const { return d_; }
  double mutation_probability() const { return r_; }
  // r / (d - 1): probability that a given child has a given foreign type.
  double per_type_mutation() const { return r_ / static_cast<double>(d_ - 1); }

  // mu_i(v). Zero when |v| is outside the support of mu.
  double pmf(std::size_t mother, std::span<const std::int64_t> v) const;

  CountVector sample(std::size_t mother, Rng& rng) const;
  std::size_t sample_child_type(std::size_t mother, Rng& rng) const;
  // Types for `total` children of a type-`mother` individual.
  CountVector split_children(std::size_t mother, std::int64_t total, Rng& rng) const;

  // g_i(s) = sum_v s^v mu_i(v)
  //        = G((1 - r) s_i + (r / (d - 1)) sum_{j != i} s_j)
  // with G the generating function of mu.
  double generating_function(std::size_t i, std::span<const double> s) const;
  double generating_function_derivative(std::size_t i, std::span<const double> s,
                                        std::size_t wrt) const;

  // m(i, j) = E[xi^i(j)], row-major.
  std::vector<std::vector<double>> mean_matrix() const;

  // All offspring vectors of positive mu_i-probability with their
  // probabilities, ordered by total then lexicographically.
  std::vector<std::pair<CountVector, double>> offspring_support(std::size_t mother) const;

 private:
  void check_type(std::size_t i) const;

  OffspringLaw base_;
  std::size_t d_;
  double r_;
};

}  // namespace mdnm
