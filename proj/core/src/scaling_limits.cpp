#include "mdnm/scaling_limits.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>
#include <string>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/special_functions/erf.hpp>

#include "mdnm/errors.hpp"

namespace mdnm {

namespace {

double std_normal_cdf(double x) { return 0.5 * boost::math::erfc(-x / std::numbers::sqrt2); }

double half_line_integral(const std::function<double(double)>& f) {
  boost::math::quadrature::exp_sinh<double> integrator;
  return integrator.integrate(f, 0.0, std::numeric_limits<double>::infinity(), 1e-14);
}

}  // namespace

double erfcx(double z) {
  if (z < 25.0) return boost::math::erfc(z) * std::exp(z * z);
  const double z2 = z * z;
  return (1.0 - 1.0 / (2.0 * z2) + 3.0 / (4.0 * z2 * z2) - 15.0 / (8.0 * z2 * z2 * z2)) /
         (z * std::sqrt(std::numbers::pi));
}

void validate(const IGParams& p) {
  if (!(p.mean > 0.0) || !(p.shape > 0.0))
    throw InvalidArgument("inverse Gaussian parameters must be positive");
}

double ig_density(const IGParams& p, double t) {
  validate(p);
  if (!(t > 0.0)) throw DomainError("inverse Gaussian density needs t > 0");
  const double dev = t - p.mean;
  return std::sqrt(p.shape / (2.0 * std::numbers::pi * t * t * t)) *
         std::exp(-p.shape * dev * dev / (2.0 * p.mean * p.mean * t));
}

double ig_cdf(const IGParams& p, double t) {
  validate(p);
  if (t <= 0.0) return 0.0;
  const double s = std::sqrt(p.shape / t);
  const double first = std_normal_cdf(s * (t / p.mean - 1.0));
  // exp(2 shape/mean) Phi(-b), written through erfcx to avoid overflow.
  const double b = s * (t / p.mean + 1.0);
  const double z = b / std::numbers::sqrt2;
  const double second = 0.5 * erfcx(z) * std::exp(2.0 * p.shape / p.mean - z * z);
  return std::min(1.0, first + second);
}

double ig_sample(const IGParams& p, Rng& rng) {
  validate(p);
  const double mu = p.mean, lambda = p.shape;
  const double n = draw_standard_normal(rng);
  const double w = mu * n * n;
  // Larger root first; the smaller one follows from the product of the
  // roots being mu^2, which avoids cancellation.
  const double large = mu + (mu / (2.0 * lambda)) * (w + std::sqrt(w * (4.0 * lambda + w)));
  const double small = mu * mu / large;
  return uniform_open(rng) <= mu / (mu + small) ? small : large;
}

double ig_log_mgf(const IGParams& p, double q) {
  validate(p);
  const double limit = p.shape / (2.0 * p.mean * p.mean);
  if (q > limit) throw DomainError("moment generating function is infinite at this argument");
  return (p.shape / p.mean) * (1.0 - std::sqrt(1.0 - q / limit));
}

void validate(const LimitParams& p) {
  if (!(p.c > 0.0)) throw InvalidArgument("c must be positive");
  if (!(p.sigma2 > 0.0)) throw InvalidArgument("sigma2 must be positive");
  if (p.d < 2) throw InvalidArgument("d must be at least 2");
  for (double v : p.y)
    if (!(v > 0.0)) throw InvalidArgument("initial profile entries must be positive");
}

IGParams theta_law(const LimitParams& p) {
  validate(p);
  return {1.0 / p.c, 1.0 / p.sigma2};
}

double kappa(const LimitParams& p, double q) {
  validate(p);
  const double limit = p.c * p.c / (2.0 * p.sigma2);
  if (q >= limit)
    throw DomainError("kappa is defined for q < c^2/(2 sigma^2) = " + std::to_string(limit));
  return (p.c / p.sigma2) * (1.0 - std::sqrt(1.0 - q / limit));
}

std::vector<double> kappa_vector(const LimitParams& p, std::span<const double> x,
                                 std::span<const double> z) {
  validate(p);
  if (x.size() != p.d || z.size() != p.d) throw InvalidArgument("argument has wrong length");
  const double limit = p.c * p.c / (2.0 * p.sigma2);
  const double w = p.c / static_cast<double>(p.d - 1);
  std::vector<double> out(p.d);
  for (std::size_t j = 0; j < p.d; ++j) {
    double q = x[j];
    for (std::size_t i = 0; i < p.d; ++i)
      if (i != j) q += w * z[i];
    if (q >= limit)
      throw DomainError("kappa argument for type " + std::to_string(j + 1) +
                        " is outside the domain");
    out[j] = kappa(p, q);
  }
  return out;
}

double limit_transition_mgf(const LimitParams& p, std::span<const double> v,
                            std::span<const double> x, std::span<const double> z) {
  if (v.size() != p.d) throw InvalidArgument("argument has wrong length");
  auto k = kappa_vector(p, x, z);
  double s = 0.0;
  for (std::size_t j = 0; j < p.d; ++j) s += v[j] * k[j];
  return std::exp(s);
}

std::vector<double> limit_mutant_vector(const LimitParams& p, double mass, std::size_t type) {
  validate(p);
  if (type >= p.d) throw InvalidArgument("type index out of range");
  std::vector<double> out(p.d, p.c / static_cast<double>(p.d - 1) * mass);
  out[type] = 0.0;
  return out;
}

double nu_density(const LimitParams& p, double z) {
  validate(p);
  if (!(z > 0.0)) throw DomainError("nu has a density on (0, inf) only");
  return p.c / std::sqrt(2.0 * std::numbers::pi * p.sigma2 * z * z * z) *
         std::exp(-p.c * p.c * z / (2.0 * p.sigma2));
}

double nu_tail(const LimitParams& p, double eps) {
  validate(p);
  if (!(eps > 0.0)) throw DomainError("nu tail needs eps > 0");
  if (std::isinf(eps)) return 0.0;
  const double a = p.c * p.c / (2.0 * p.sigma2);
  const double k = p.c / std::sqrt(2.0 * std::numbers::pi * p.sigma2);
  // int_eps^inf z^{-3/2} e^{-a z} dz
  //   = 2 e^{-a eps} (eps^{-1/2} - sqrt(pi a) erfcx(sqrt(a eps)))
  const double x = std::sqrt(a * eps);
  const double bracket = 1.0 / std::sqrt(eps) - std::sqrt(std::numbers::pi * a) * erfcx(x);
  return std::max(0.0, k * 2.0 * std::exp(-a * eps) * bracket);
}

double nu_tail_quadrature(const LimitParams& p, double eps) {
  validate(p);
  if (!(eps > 0.0)) throw DomainError("nu tail needs eps > 0");
  const double a = p.c * p.c / (2.0 * p.sigma2);
  const double k = p.c / std::sqrt(2.0 * std::numbers::pi * p.sigma2);
  // z = eps e^s
  auto f = [&](double s) { return std::exp(-0.5 * s - a * eps * std::exp(s)); };
  return k / std::sqrt(eps) * half_line_integral(f);
}

double nu_integral(const LimitParams& p, const std::function<double(double)>& f) {
  validate(p);
  const double a = p.c * p.c / (2.0 * p.sigma2);
  const double k = p.c / std::sqrt(2.0 * std::numbers::pi * p.sigma2);
  // z = u^2
  auto g = [&](double u) {
    if (u == 0.0) return 0.0;
    const double z = u * u;
    return 2.0 * f(z) / z * std::exp(-a * z);
  };
  auto h = [&](double u) {
    // f(z)/z tends to a finite limit at 0; evaluate slightly off the origin.
    return u < 1e-150 ? g(1e-150) : g(u);
  };
  return k * half_line_integral(h);
}

double nu_small_atom_mass(const LimitParams& p, double eps) {
  validate(p);
  if (!(eps >= 0.0)) throw DomainError("eps must be nonnegative");
  const double a = p.c * p.c / (2.0 * p.sigma2);
  return boost::math::erf(std::sqrt(a * eps));
}

double nu_laplace_exponent(const LimitParams& p, double lambda) {
  validate(p);
  if (lambda < -p.c * p.c / (2.0 * p.sigma2)) throw DomainError("Laplace exponent is infinite");
  return p.c / p.sigma2 * (std::sqrt(p.c * p.c + 2.0 * p.sigma2 * lambda) - p.c);
}

TruncatedNuSampler::TruncatedNuSampler(const LimitParams& p, double eps, std::size_t knots)
    : params_(p), eps_(eps) {
  validate(p);
  if (!(eps > 0.0)) throw DomainError("eps must be positive");
  if (knots < 2) throw InvalidArgument("need at least two knots");
  tail_eps_ = nu_tail(p, eps);
  double zmax = std::max(2.0 * eps, 1.0);
  while (nu_tail(p, zmax) > 1e-16 * tail_eps_) zmax *= 2.0;
  const double lo = std::log(eps), hi = std::log(zmax);
  log_z_.resize(knots);
  log_tail_.resize(knots);
  for (std::size_t k = 0; k < knots; ++k) {
    log_z_[k] = lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(knots - 1);
    log_tail_[k] = std::log(nu_tail(p, std::exp(log_z_[k])) / tail_eps_);
  }
  log_tail_.front() = 0.0;
}

double TruncatedNuSampler::cdf(double z) const {
  if (z <= eps_) return 0.0;
  return 1.0 - nu_tail(params_, z) / tail_eps_;
}

double TruncatedNuSampler::sample(Rng& rng) const {
  const double target = std::log(uniform_open(rng));
  if (target < log_tail_.back()) {
    // Beyond the table; bisection on the closed form.
    double lo = std::exp(log_z_.back()), hi = 2.0 * lo;
    while (std::log(nu_tail(params_, hi) / tail_eps_) > target) hi *= 2.0;
    for (int it = 0; it < 200; ++it) {
      double mid = 0.5 * (lo + hi);
      if (std::log(nu_tail(params_, mid) / tail_eps_) > target)
        lo = mid;
      else
        hi = mid;
    }
    return 0.5 * (lo + hi);
  }
  // log_tail_ is decreasing: find k with log_tail_[k] >= target > log_tail_[k+1].
  auto it = std::upper_bound(log_tail_.begin(), log_tail_.end(), target, std::greater<double>());
  std::size_t k1 = static_cast<std::size_t>(it - log_tail_.begin());
  if (k1 == 0) return eps_;
  if (k1 >= log_tail_.size()) return std::exp(log_z_.back());
  std::size_t k0 = k1 - 1;
  double t = (target - log_tail_[k0]) / (log_tail_[k1] - log_tail_[k0]);
  return std::exp(log_z_[k0] + t * (log_z_[k1] - log_z_[k0]));
}

std::vector<double> sample_csbp_offspring(const TruncatedNuSampler& sampler, double parent_mass,
                                          Rng& rng) {
  if (parent_mass < 0.0) throw InvalidArgument("parent mass must be nonnegative");
  std::vector<double> atoms;
  if (parent_mass == 0.0) return atoms;
  std::int64_t n = draw_poisson(rng, parent_mass * sampler.tail_mass());
  atoms.reserve(static_cast<std::size_t>(n));
  for (std::int64_t k = 0; k < n; ++k) atoms.push_back(sampler.sample(rng));
  std::sort(atoms.begin(), atoms.end(), std::greater<double>());
  return atoms;
}

CSBPSample sample_tree_csbp(const LimitParams& p, const TruncatedNuSampler& sampler,
                            const CSBPOptions& options, Rng& rng) {
  validate(p);
  if (options.root_type >= p.d) throw InvalidArgument("root type out of range");
  CSBPSample out;
  out.depth = options.depth;
  out.max_children = options.max_children;
  out.eps = sampler.eps();
  CSBPSample::Node root;
  root.mass = options.initial_mass ? *options.initial_mass : ig_sample(theta_law(p), rng);
  if (root.mass < 0.0) throw InvalidArgument("initial mass must be nonnegative");
  root.type = options.root_type;
  out.nodes.push_back(std::move(root));
  const double small = nu_small_atom_mass(p, sampler.eps());
  for (std::size_t id = 0; id < out.nodes.size(); ++id) {
    if (out.nodes[id].path.size() >= options.depth) continue;
    const double mass = out.nodes[id].mass;
    const std::size_t type = out.nodes[id].type;
    auto atoms = sample_csbp_offspring(sampler, mass, rng);
    out.small_atom_bound += mass * small;
    for (std::size_t k = 0; k < atoms.size(); ++k) {
      if (k >= options.max_children) {
        ++out.nodes[id].dropped_count;
        out.nodes[id].dropped_mass += atoms[k];
        continue;
      }
      CSBPSample::Node child;
      child.path = out.nodes[id].path;
      child.path.push_back(static_cast<std::uint32_t>(k + 1));
      child.mass = atoms[k];
      child.parent = id;
      auto pick = static_cast<std::size_t>(uniform_open(rng) * static_cast<double>(p.d - 1));
      if (pick >= p.d - 1) pick = p.d - 2;
      child.type = pick < type ? pick : pick + 1;
      out.nodes.push_back(std::move(child));
    }
  }
  return out;
}

void write_csbp_records(std::ostream& os, const CSBPSample& sample) {
  os << "# path\tmass\ttype\n";
  auto old = os.precision(17);
  for (const auto& node : sample.nodes) {
    os << 'r';
    for (auto k : node.path) os << '.' << k;
    os << '\t' << node.mass << '\t' << node.type + 1 << '\n';
  }
  os.precision(old);
}

}  // namespace mdnm
