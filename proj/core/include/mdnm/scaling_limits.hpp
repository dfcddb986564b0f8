// Limit objects: inverse Gaussian kit, the cumulant kappa, the reproduction
// measure nu and the tree-indexed continuous-state branching sampler.
#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "mdnm/random.hpp"

namespace mdnm {

struct IGParams {
  double mean;
  double shape;
};

void validate(const IGParams& p);
double ig_density(const IGParams& p, double t);
double ig_cdf(const IGParams& p, double t);
// Michael, Schucany and Haas transformation.
double ig_sample(const IGParams& p, Rng& rng);
// log E[e^{q T}], finite for q <= shape / (2 mean^2).
double ig_log_mgf(const IGParams& p, double q);

// erfc(z) e^{z^2}, accurate for large positive z where erfc underflows.
double erfcx(double z);

struct LimitParams {
  double c = 1.0;
  double sigma2 = 1.0;
  std::size_t d = 2;
  // Initial profile; may be empty when unused.
  std::vector<double> y;
};

void validate(const LimitParams& p);

// Law of theta_1: IG(1/c, 1/sigma^2).
IGParams theta_law(const LimitParams& p);
// kappa(q) = (c/sigma^2)(1 - sqrt(1 - 2 sigma^2 q / c^2)), q < c^2/(2 sigma^2).
double kappa(const LimitParams& p, double q);
// kappa_j(x, z) = kappa(x(j) + (c/(d-1)) sum_{i != j} z(i)).
std::vector<double> kappa_vector(const LimitParams& p, std::span<const double> x,
                                 std::span<const double> z);
// exp(<v, kappa(x, z)>).
double limit_transition_mgf(const LimitParams& p, std::span<const double> v,
                            std::span<const double> x, std::span<const double> z);
// Mutant vector of a limit node of mass `mass` and type `type`:
// c/(d-1) mass on every other coordinate.
std::vector<double> limit_mutant_vector(const LimitParams& p, double mass, std::size_t type);

// nu(dz) = c (2 pi sigma^2 z^3)^{-1/2} exp(-c^2 z / (2 sigma^2)) dz.
double nu_density(const LimitParams& p, double z);
// nu([eps, inf)) in closed form (complementary error function).
double nu_tail(const LimitParams& p, double eps);
// nu([eps, inf)) by numerical quadrature.
double nu_tail_quadrature(const LimitParams& p, double eps);
// int f(z) nu(dz) over (0, inf) by quadrature; f must be O(z) at 0.
double nu_integral(const LimitParams& p, const std::function<double(double)>& f);
// int_0^eps z nu(dz): mass carried by atoms below eps, per unit parent mass.
double nu_small_atom_mass(const LimitParams& p, double eps);
// int (1 - e^{-lambda z}) nu(dz) = (c/sigma^2)(sqrt(c^2 + 2 sigma^2 lambda) - c).
double nu_laplace_exponent(const LimitParams& p, double lambda);

// Inverse-transform sampler for nu restricted to [eps, inf) and normalised,
// on a log-spaced table of the tail with log-log linear interpolation.
class TruncatedNuSampler {
 public:
  TruncatedNuSampler(const LimitParams& p, double eps, std::size_t knots = 2048);

  double eps() const { return eps_; }
  double tail_mass() const { return tail_eps_; }
  // P(Z <= z) for Z ~ nu restricted to [eps, inf), normalised.
  double cdf(double z) const;
  double sample(Rng& rng) const;

 private:
  LimitParams params_;
  double eps_;
  double tail_eps_;
  std::vector<double> log_z_;
  // log of the normalised tail at each knot, decreasing from 0.
  std::vector<double> log_tail_;
};

// Atoms of a Poisson random measure with intensity parent_mass nu on
// [eps, inf), sorted decreasing.
std::vector<double> sample_csbp_offspring(const TruncatedNuSampler& sampler, double parent_mass,
                                          Rng& rng);

struct CSBPOptions {
  std::uint32_t depth = 1;
  std::size_t max_children = 16;
  // Fixed root mass; unset draws it from theta_law.
  std::optional<double> initial_mass;
  std::size_t root_type = 0;
};

struct CSBPSample {
  struct Node {
    std::vector<std::uint32_t> path;
    double mass = 0.0;
    // Label only: children take a type drawn uniformly among the other d - 1.
    std::size_t type = 0;
    std::size_t parent = SIZE_MAX;
    // Atoms above eps drawn but not kept because of max_children.
    std::size_t dropped_count = 0;
    double dropped_mass = 0.0;
  };
  std::vector<Node> nodes;
  std::uint32_t depth = 0;
  std::size_t max_children = 0;
  double eps = 0.0;
  // Expected mass missed below eps, summed over expanded nodes.
  double small_atom_bound = 0.0;
};

CSBPSample sample_tree_csbp(const LimitParams& p, const TruncatedNuSampler& sampler,
                            const CSBPOptions& options, Rng& rng);

// "path  mass  type" per node, breadth-first.
void write_csbp_records(std::ostream& os, const CSBPSample& sample);

}  // namespace mdnm
