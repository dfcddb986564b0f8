// Exact law of (T_0, M_1): convolution powers, the Lagrange-inversion pmf,
// the generating-function fixed point and the first moments.
#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <utility>
#include <vector>

#include "mdnm/offspring_laws.hpp"
#include "mdnm/types.hpp"

namespace mdnm {

using VectorPmf = std::map<CountVector, double>;

struct TruncatedPmf {
  VectorPmf pmf;
  double captured_mass = 0.0;
};

// mu_i^{*k} restricted to |v| <= cap. Entries below 1e-16 are pruned.
// Throws CapTooSmall when the kept mass is below min_captured.
TruncatedPmf convolution_power(const MotherDependentLaw& law, std::uint32_t type, std::int64_t k,
                               std::int64_t cap, double min_captured = 0.5);

struct JointPmf {
  // (k, l) -> P(T_0 = k, M_1 = l), for |k| <= max_total.
  std::map<std::pair<CountVector, CountVector>, double> entries;
  std::int64_t max_total = 0;
  double captured_mass = 0.0;
};

struct ExactOptions {
  double min_captured = 0.5;
};

// P_a(T_0 = k, M_1 = l) = prod_i (a(i) / k(i)) mu_i^{*k(i)}(w_i + (k(i) - a(i)) e_i)
// summed over the ways of writing l = sum_i w_i with w_i(i) = 0. Types with
// a(i) = 0 contribute T_0(i) = 0 and nothing to M_1. The sum over
// decompositions is evaluated as a convolution over types.
JointPmf exact_joint_pmf(const MotherDependentLaw& law, std::span<const std::int64_t> a,
                         std::int64_t max_total, const ExactOptions& options = {});

// Sum of P x^k y^l over the table (partial sums of the generating function).
double truncated_mgf(const JointPmf& pmf, std::span<const double> x, std::span<const double> y);

// Marginal law of T_0 from a joint table, keyed by the k-vector.
VectorPmf clone_marginal(const JointPmf& pmf);

struct FixedPointOptions {
  double tolerance = 1e-12;
  std::uint64_t max_iterations = 1'000'000;
};

// Minimal solution of phi = x g_i(phi e_i + ybar with ybar(i) replaced).
// Newton's method from 0 increases monotonically to the minimal root
// because phi - x g_i is concave; plain iteration is used as a fallback.
// x slightly above 1 is accepted when the minimal root still exists.
double mgf_fixed_point(const MotherDependentLaw& law, std::uint32_t type, double x,
                       std::span<const double> ybar, const FixedPointOptions& options = {});

// E_a[prod_i x_i^{T_0(i)} y_i^{M_1(i)}] = prod_i phi_i(x_i, y)^{a(i)}.
double joint_mgf(const MotherDependentLaw& law, std::span<const std::int64_t> a,
                 std::span<const double> x, std::span<const double> y,
                 const FixedPointOptions& options = {});

struct MomentReport {
  // E_a[T_0(i)] = a(i) / (1 - m_ii); +infinity when m_ii >= 1 and a(i) > 0.
  std::vector<double> mean_t0;
  // E_a[M_1(j)] = sum_{i != j} a(i) m_ij / (1 - m_ii).
  std::vector<double> mean_m1;
  // E_a[|M_1|^2]; +infinity when some started type has m_ii >= 1.
  double second_moment_abs_m1 = 0.0;
};

MomentReport moments(const MotherDependentLaw& law, std::span<const std::int64_t> a);

// "k(1..d)  l(1..d)  probability" per line.
void write_joint_pmf_records(std::ostream& os, const JointPmf& pmf);

}  // namespace mdnm
