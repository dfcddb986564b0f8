#include "mdnm/offspring_laws.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

#include "mdnm/errors.hpp"

namespace mdnm {

OffspringLaw OffspringLaw::from_pmf(std::vector<Atom> atoms) {
  OffspringLaw law;
  double sum = 0.0;
  for (const auto& a : atoms) {
    if (a.count < 0) throw InvalidArgument("offspring counts must be nonnegative");
    if (!(a.probability >= 0.0 && a.probability <= 1.0))
      throw InvalidArgument("probability for count " + std::to_string(a.count) +
                            " is outside [0, 1]");
    sum += a.probability;
  }
  if (std::abs(sum - 1.0) > 1e-12)
    throw InvalidArgument("offspring probabilities sum to " + std::to_string(sum) +
                          ", not 1");
  std::sort(atoms.begin(), atoms.end(),
            [](const Atom& x, const Atom& y) { return x.count < y.count; });
  for (std::size_t k = 1; k < atoms.size(); ++k)
    if (atoms[k].count == atoms[k - 1].count)
      throw InvalidArgument("offspring count " + std::to_string(atoms[k].count) +
                            " listed twice");
  for (const auto& a : atoms)
    if (a.probability > 0.0) law.atoms_.push_back({a.count, a.probability / sum});
  if (law.atoms_.empty()) throw InvalidArgument("offspring law has no mass");
  law.finalize();
  return law;
}

OffspringLaw OffspringLaw::geometric(double p, double tail_mass) {
  if (!(p > 0.0 && p <= 1.0)) throw InvalidArgument("geometric parameter must lie in (0, 1]");
  std::vector<Atom> atoms;
  double remaining = 1.0;
  for (std::int64_t k = 0; remaining > tail_mass; ++k) {
    double prob = std::pow(1.0 - p, static_cast<double>(k)) * p;
    atoms.push_back({k, prob});
    remaining -= prob;
  }
  double sum = 0.0;
  for (auto& a : atoms) sum += a.probability;
  for (auto& a : atoms) a.probability /= sum;
  return from_pmf(std::move(atoms));
}

OffspringLaw OffspringLaw::poisson(double mean, double tail_mass) {
  if (!(mean >= 0.0)) throw InvalidArgument("Poisson mean must be nonnegative");
  std::vector<Atom> atoms;
  double remaining = 1.0;
  for (std::int64_t k = 0; remaining > tail_mass; ++k) {
    double prob = std::exp(-mean + static_cast<double>(k) * std::log(mean) -
                           std::lgamma(static_cast<double>(k) + 1.0));
    if (mean == 0.0) prob = k == 0 ? 1.0 : 0.0;
    atoms.push_back({k, prob});
    remaining -= prob;
    if (k > mean && prob == 0.0) break;
  }
  double sum = 0.0;
  for (auto& a : atoms) sum += a.probability;
  for (auto& a : atoms) a.probability /= sum;
  return from_pmf(std::move(atoms));
}

OffspringLaw OffspringLaw::critical_binary() { return from_pmf({{0, 0.5}, {2, 0.5}}); }

void OffspringLaw::finalize() {
  cumulative_.clear();
  double c = 0.0, m = 0.0, m2 = 0.0;
  for (const auto& a : atoms_) {
    c += a.probability;
    cumulative_.push_back(c);
    double k = static_cast<double>(a.count);
    m += k * a.probability;
    m2 += k * k * a.probability;
  }
  cumulative_.back() = 1.0;
  mean_ = m;
  variance_ = m2 - m * m;
}

double OffspringLaw::pmf(std::int64_t n) const {
  auto it = std::lower_bound(atoms_.begin(), atoms_.end(), n,
                             [](const Atom& a, std::int64_t k) { return a.count < k; });
  return (it != atoms_.end() && it->count == n) ? it->probability : 0.0;
}

bool OffspringLaw::nontrivial() const { return pmf(0) + pmf(1) < 1.0; }

double OffspringLaw::pgf(double s) const {
  double g = 0.0;
  for (const auto& a : atoms_) g += a.probability * std::pow(s, static_cast<double>(a.count));
  return g;
}

double OffspringLaw::pgf_derivative(double s) const {
  double g = 0.0;
  for (const auto& a : atoms_)
    if (a.count > 0)
      g += a.probability * static_cast<double>(a.count) *
           std::pow(s, static_cast<double>(a.count - 1));
  return g;
}

std::int64_t OffspringLaw::sample(Rng& rng) const {
  double u = uniform_open(rng);
  auto it = std::lower_bound(cumulative_.begin(), cumulative_.end(), u);
  if (it == cumulative_.end()) --it;
  return atoms_[static_cast<std::size_t>(it - cumulative_.begin())].count;
}

std::int64_t OffspringLaw::sample_sum(std::int64_t copies, Rng& rng) const {
  if (copies <= 0) return 0;
  if (copies <= 8) {
    std::int64_t s = 0;
    for (std::int64_t c = 0; c < copies; ++c) s += sample(rng);
    return s;
  }
  // Multinomial split of the copies over the atoms.
  std::int64_t left = copies, sum = 0;
  double mass_left = 1.0;
  for (std::size_t k = 0; k + 1 < atoms_.size() && left > 0; ++k) {
    double p = atoms_[k].probability / mass_left;
    std::int64_t n = draw_binomial(rng, left, std::min(1.0, p));
    sum += n * atoms_[k].count;
    left -= n;
    mass_left -= atoms_[k].probability;
    if (mass_left <= 0.0) break;
  }
  sum += left * atoms_.back().count;
  return sum;
}

MotherDependentLaw::MotherDependentLaw(OffspringLaw base, std::size_t types, double r)
    : base_(std::move(base)), d_(types), r_(r) {
  if (d_ < 2) throw InvalidArgument("number of types must be at least 2");
  if (!(r_ >= 0.0 && r_ <= 1.0)) throw InvalidArgument("mutation probability must lie in [0, 1]");
}

void MotherDependentLaw::check_type(std::size_t i) const {
  if (i >= d_)
    throw InvalidArgument("type index " + std::to_string(i) + " outside [0, " +
                          std::to_string(d_) + ")");
}

double MotherDependentLaw::pmf(std::size_t mother, std::span<const std::int64_t> v) const {
  check_type(mother);
  if (v.size() != d_) throw InvalidArgument("offspring vector has wrong length");
  std::int64_t n = 0;
  for (auto x : v) {
    if (x < 0) return 0.0;
    n += x;
  }
  double base = base_.pmf(n);
  if (base == 0.0) return 0.0;
  const std::int64_t clones = v[mother];
  const std::int64_t mutants = n - clones;
  const double q = per_type_mutation();
  if (clones > 0 && r_ >= 1.0) return 0.0;
  if (mutants > 0 && q <= 0.0) return 0.0;
  double lp = std::log(base) + std::lgamma(static_cast<double>(n) + 1.0);
  for (auto x : v) lp -= std::lgamma(static_cast<double>(x) + 1.0);
  if (clones > 0) lp += static_cast<double>(clones) * std::log1p(-r_);
  if (mutants > 0) lp += static_cast<double>(mutants) * std::log(q);
  return std::exp(lp);
}

CountVector MotherDependentLaw::split_children(std::size_t mother, std::int64_t total,
                                               Rng& rng) const {
  CountVector v(d_, 0);
  std::int64_t clones = draw_binomial(rng, total, 1.0 - r_);
  v[mother] = clones;
  std::int64_t left = total - clones;
  std::size_t others = d_ - 1;
  for (std::size_t j = 0; j < d_ && left > 0; ++j) {
    if (j == mother) continue;
    if (others == 1) {
      v[j] = left;
      left = 0;
      break;
    }
    std::int64_t k = draw_binomial(rng, left, 1.0 / static_cast<double>(others));
    v[j] = k;
    left -= k;
    --others;
  }
  return v;
}

CountVector MotherDependentLaw::sample(std::size_t mother, Rng& rng) const {
  check_type(mother);
  return split_children(mother, base_.sample(rng), rng);
}

std::size_t MotherDependentLaw::sample_child_type(std::size_t mother, Rng& rng) const {
  if (r_ <= 0.0 || (r_ < 1.0 && uniform_open(rng) >= r_)) return mother;
  auto k = static_cast<std::size_t>(uniform_open(rng) * static_cast<double>(d_ - 1));
  if (k >= d_ - 1) k = d_ - 2;
  return k < mother ? k : k + 1;
}

double MotherDependentLaw::generating_function(std::size_t i, std::span<const double> s) const {
  check_type(i);
  if (s.size() != d_) throw InvalidArgument("argument has wrong length");
  double arg = (1.0 - r_) * s[i];
  double q = per_type_mutation();
  for (std::size_t j = 0; j < d_; ++j)
    if (j != i) arg += q * s[j];
  return base_.pgf(arg);
}

double MotherDependentLaw::generating_function_derivative(std::size_t i,
                                                          std::span<const double> s,
                                                          std::size_t wrt) const {
  check_type(i);
  check_type(wrt);
  double arg = (1.0 - r_) * s[i];
  double q = per_type_mutation();
  for (std::size_t j = 0; j < d_; ++j)
    if (j != i) arg += q * s[j];
  return base_.pgf_derivative(arg) * (wrt == i ? 1.0 - r_ : q);
}

std::vector<std::vector<double>> MotherDependentLaw::mean_matrix() const {
  std::vector<std::vector<double>> m(d_, std::vector<double>(d_, 0.0));
  const double mean = base_.mean();
  for (std::size_t i = 0; i < d_; ++i)
    for (std::size_t j = 0; j < d_; ++j)
      m[i][j] = (i == j ? 1.0 - r_ : per_type_mutation()) * mean;
  return m;
}

std::vector<std::pair<CountVector, double>> MotherDependentLaw::offspring_support(
    std::size_t mother) const {
  check_type(mother);
  std::vector<std::pair<CountVector, double>> out;
  CountVector v(d_, 0);
  // Compositions of n into d parts, lexicographic.
  std::function<void(std::size_t, std::int64_t)> rec = [&](std::size_t j, std::int64_t left) {
    if (j + 1 == d_) {
      v[j] = left;
      double p = pmf(mother, v);
      if (p > 0.0) out.emplace_back(v, p);
      return;
    }
    for (std::int64_t k = 0; k <= left; ++k) {
      v[j] = k;
      rec(j + 1, left - k);
    }
  };
  for (const auto& a : base_.atoms()) rec(0, a.count);
  return out;
}

}  // namespace mdnm
