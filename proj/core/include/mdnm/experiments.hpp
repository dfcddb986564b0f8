// Finite-n experiments against the scaling limits, and their reports.
#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "mdnm/coding_walks.hpp"
#include "mdnm/gof.hpp"
#include "mdnm/offspring_laws.hpp"
#include "mdnm/scaling_limits.hpp"

namespace mdnm {

// Critical base law with variance sigma^2, n initial individuals of one
// type and mutation probability r = c / n.
struct ScalingSetup {
  OffspringLaw base = OffspringLaw::critical_binary();
  double c = 1.0;
  std::size_t d = 2;
  std::uint32_t type = 0;
  std::int64_t n = 2000;
};

// Throws InvalidArgument unless the base mean is 1 (within 1e-12), n >= 1
// and 0 < c <= n.
void validate(const ScalingSetup& s);
MotherDependentLaw scaled_law(const ScalingSetup& s);
LimitParams limit_params(const ScalingSetup& s);

struct Lemma4Report {
  std::size_t replicas = 0;
  // n^-2 T_0(j) against IG(1/c, 1/sigma^2).
  GofReport ks_clones;
  // n^-1 M_1(i), i the first type other than j, against c/(d-1) theta.
  GofReport ks_mutants;
  // Fallback for the lattice of n^-2 T_0: chi-square over IG-equiprobable
  // cells with edges snapped to the lattice.
  GofReport binned_clones;
  double mean_clones = 0.0;
  double correlation = 0.0;
  std::vector<double> clones;
  std::vector<double> mutants;
};

Lemma4Report run_lemma4_experiment(const ScalingSetup& setup, std::size_t replicas,
                                   std::uint64_t seed, unsigned threads,
                                   const HittingOptions& hitting = {});

struct Theorem1Options {
  std::uint32_t depth = 1;
  double threshold = 0.1;
  // Replicas are split into this many bins by root mass for the
  // conditional intensity check.
  std::size_t mass_bins = 5;
  HittingOptions hitting;
};

struct IntensityBin {
  double mass_low = 0.0;
  double mass_high = 0.0;
  std::size_t replicas = 0;
  double expected = 0.0;
  std::size_t observed = 0;
  double ratio = 0.0;
};

struct LevelIntensity {
  std::uint32_t depth = 0;
  double expected = 0.0;
  std::size_t observed = 0;
  double ratio = 0.0;
};

struct Theorem1Report {
  std::size_t replicas = 0;
  double threshold = 0.0;
  double limit_tail = 0.0;  // nu([threshold, inf))
  GofReport ks_root;
  // Depth-1 counts above the threshold against sum of m nu([x, inf)).
  double expected_count = 0.0;
  std::size_t observed_count = 0;
  double intensity_ratio = 0.0;
  std::vector<IntensityBin> bins;
  // Pearson test of the depth-1 count law against the Poisson mixture.
  GofReport count_law;
  // Depth-1 masses above the threshold against nu restricted and
  // normalised on [threshold, inf).
  GofReport ks_child_masses;
  // exp(-m nu([Z, inf))) for the largest depth-1 mass Z, against uniform.
  GofReport ks_largest_child;
  // Counts above threshold at depths 1..depth, given parent masses.
  std::vector<LevelIntensity> levels;
  std::vector<double> root_masses;
  std::vector<double> child_masses;
};

Theorem1Report run_theorem1_experiment(const ScalingSetup& setup, std::size_t replicas,
                                       std::uint64_t seed, unsigned threads,
                                       const Theorem1Options& options = {});

// JSON object per line. Reports carry no timing so that reruns with the
// same seed are byte-identical; runtimes go to write_timing_record.
void write_gof_record(std::ostream& os, const std::string& experiment,
                      const std::string& parameters_json, const std::string& test_name,
                      const GofReport& report);
void write_lemma4_report(std::ostream& os, const ScalingSetup& setup, std::uint64_t seed,
                         const Lemma4Report& report);
void write_theorem1_report(std::ostream& os, const ScalingSetup& setup, std::uint64_t seed,
                           const Theorem1Options& options, const Theorem1Report& report);
void write_timing_record(std::ostream& os, const std::string& experiment, double seconds);

// "left  right  count" per bin over [lo, hi].
void write_histogram(std::ostream& os, const std::vector<double>& values, std::size_t bins,
                     double lo, double hi);

}  // namespace mdnm
