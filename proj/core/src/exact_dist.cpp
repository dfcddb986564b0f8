#include "mdnm/exact_dist.hpp"

#include <cmath>
#include <limits>
#include <ostream>

#include "mdnm/errors.hpp"

namespace mdnm {

namespace {

constexpr double kPrune = 1e-16;

VectorPmf law_as_pmf(const MotherDependentLaw& law, std::uint32_t type) {
  VectorPmf out;
  for (auto& [v, p] : law.offspring_support(type)) out[v] = p;
  return out;
}

template <class Keep>
VectorPmf convolve(const VectorPmf& x, const VectorPmf& y, Keep keep) {
  VectorPmf out;
  CountVector v;
  for (const auto& [a, pa] : x) {
    for (const auto& [b, pb] : y) {
      v = a;
      add_into(v, b);
      if (!keep(v)) continue;
      out[v] += pa * pb;
    }
  }
  for (auto it = out.begin(); it != out.end();) {
    if (it->second < kPrune)
      it = out.erase(it);
    else
      ++it;
  }
  return out;
}

double mass(const VectorPmf& p) {
  double s = 0.0;
  for (const auto& [v, q] : p) s += q;
  return s;
}

}  // namespace

TruncatedPmf convolution_power(const MotherDependentLaw& law, std::uint32_t type, std::int64_t k,
                               std::int64_t cap, double min_captured) {
  if (type >= law.types()) throw InvalidArgument("type index out of range");
  if (k < 1) throw InvalidArgument("convolution power must be >= 1");
  auto keep = [cap](const CountVector& v) { return total(v) <= cap; };
  VectorPmf base;
  for (auto& [v, p] : law_as_pmf(law, type))
    if (keep(v)) base[v] = p;
  VectorPmf acc = base;
  for (std::int64_t j = 1; j < k; ++j) acc = convolve(acc, base, keep);
  TruncatedPmf out{std::move(acc), 0.0};
  out.captured_mass = mass(out.pmf);
  if (out.captured_mass < min_captured) throw CapTooSmall(out.captured_mass, cap);
  return out;
}

JointPmf exact_joint_pmf(const MotherDependentLaw& law, std::span<const std::int64_t> a,
                         std::int64_t max_total, const ExactOptions& options) {
  const std::size_t d = law.types();
  if (a.size() != d) throw InvalidArgument("initial vector has wrong length");
  for (auto x : a)
    if (x < 0) throw InvalidArgument("initial counts must be nonnegative");
  const std::int64_t size = total(a);
  if (size < 1) throw InvalidArgument("initial population is empty");
  if (max_total < size) throw InvalidArgument("truncation bound below |a|");

  using Key = std::pair<CountVector, CountVector>;
  std::map<Key, double> joint{{{CountVector(d, 0), CountVector(d, 0)}, 1.0}};
  for (std::uint32_t i = 0; i < d; ++i) {
    if (a[i] == 0) continue;
    const std::int64_t kmax = max_total - (size - a[i]);
    // The clone coordinate never decreases under convolution, so entries
    // beyond the largest coordinate ever read can be dropped.
    const std::int64_t clone_cap = kmax - a[i];
    auto keep = [i, clone_cap](const CountVector& v) { return v[i] <= clone_cap; };
    VectorPmf step;
    for (auto& [v, p] : law_as_pmf(law, i))
      if (keep(v)) step[v] = p;

    // (k, w) -> (a(i)/k) mu_i^{*k}(w + (k - a(i)) e_i)
    std::vector<std::pair<std::pair<std::int64_t, CountVector>, double>> factor;
    VectorPmf power = step;
    for (std::int64_t k = 1; k <= kmax; ++k) {
      if (k > 1) power = convolve(power, step, keep);
      if (k < a[i]) continue;
      const double weight = static_cast<double>(a[i]) / static_cast<double>(k);
      for (const auto& [v, p] : power) {
        if (v[i] != k - a[i]) continue;
        CountVector w = v;
        w[i] = 0;
        factor.push_back({{k, std::move(w)}, weight * p});
      }
    }

    std::map<Key, double> next;
    for (const auto& [key, p] : joint) {
      const std::int64_t used = total(key.first);
      for (const auto& [kw, q] : factor) {
        if (used + kw.first > max_total) continue;
        Key nk = key;
        nk.first[i] += kw.first;
        add_into(nk.second, kw.second);
        next[nk] += p * q;
      }
    }
    joint = std::move(next);
  }

  JointPmf out;
  out.max_total = max_total;
  for (auto& [key, p] : joint) {
    out.entries[key] = p;
    out.captured_mass += p;
  }
  if (out.captured_mass < options.min_captured) throw CapTooSmall(out.captured_mass, max_total);
  return out;
}

double truncated_mgf(const JointPmf& pmf, std::span<const double> x, std::span<const double> y) {
  double s = 0.0;
  for (const auto& [key, p] : pmf.entries) {
    double term = p;
    for (std::size_t j = 0; j < key.first.size(); ++j)
      term *= std::pow(x[j], static_cast<double>(key.first[j])) *
              std::pow(y[j], static_cast<double>(key.second[j]));
    s += term;
  }
  return s;
}

VectorPmf clone_marginal(const JointPmf& pmf) {
  VectorPmf out;
  for (const auto& [key, p] : pmf.entries) out[key.first] += p;
  return out;
}

double mgf_fixed_point(const MotherDependentLaw& law, std::uint32_t type, double x,
                       std::span<const double> ybar, const FixedPointOptions& options) {
  const std::size_t d = law.types();
  if (type >= d) throw InvalidArgument("type index out of range");
  if (ybar.size() != d) throw InvalidArgument("ybar has wrong length");
  if (x < 0.0) throw InvalidArgument("x must be nonnegative");
  if (x == 0.0) return 0.0;
  std::vector<double> s(ybar.begin(), ybar.end());
  auto g = [&](double phi) {
    s[type] = phi;
    return law.generating_function(type, s);
  };
  auto dg = [&](double phi) {
    s[type] = phi;
    return law.generating_function_derivative(type, s, type);
  };

  double phi = 0.0;
  std::uint64_t it = 0;
  bool newton_ok = true;
  for (; it < 200; ++it) {
    double f = x * g(phi) - phi;
    double slope = x * dg(phi) - 1.0;
    if (!(slope < 0.0)) {
      newton_ok = false;
      break;
    }
    double next = phi - f / slope;
    if (!std::isfinite(next) || next < phi) {
      newton_ok = false;
      break;
    }
    if (next - phi <= options.tolerance) return next;
    phi = next;
  }
  if (newton_ok && it == 200) newton_ok = false;

  // Monotone iteration from 0.
  phi = 0.0;
  double residual = 0.0;
  for (std::uint64_t k = 0; k < options.max_iterations; ++k) {
    double next = x * g(phi);
    residual = std::abs(next - phi);
    if (!std::isfinite(next)) break;
    phi = next;
    if (residual <= options.tolerance) return phi;
  }
  throw NoConvergence(phi, residual, options.max_iterations);
}

double joint_mgf(const MotherDependentLaw& law, std::span<const std::int64_t> a,
                 std::span<const double> x, std::span<const double> y,
                 const FixedPointOptions& options) {
  const std::size_t d = law.types();
  if (a.size() != d || x.size() != d || y.size() != d)
    throw InvalidArgument("argument has wrong length");
  double out = 1.0;
  for (std::uint32_t i = 0; i < d; ++i) {
    if (a[i] == 0) continue;
    double phi = mgf_fixed_point(law, i, x[i], y, options);
    out *= std::pow(phi, static_cast<double>(a[i]));
  }
  return out;
}

MomentReport moments(const MotherDependentLaw& law, std::span<const std::int64_t> a) {
  const std::size_t d = law.types();
  if (a.size() != d) throw InvalidArgument("initial vector has wrong length");
  const double inf = std::numeric_limits<double>::infinity();
  const auto m = law.mean_matrix();
  const double r = law.mutation_probability();
  MomentReport rep{std::vector<double>(d, 0.0), std::vector<double>(d, 0.0), 0.0};

  bool infinite = false;
  for (std::size_t i = 0; i < d; ++i) {
    if (a[i] == 0) continue;
    if (m[i][i] >= 1.0) {
      rep.mean_t0[i] = inf;
      infinite = true;
    } else {
      rep.mean_t0[i] = static_cast<double>(a[i]) / (1.0 - m[i][i]);
    }
  }
  for (std::size_t j = 0; j < d; ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
      if (i == j || a[i] == 0 || m[i][j] == 0.0) continue;
      s += m[i][i] >= 1.0 ? inf : static_cast<double>(a[i]) * m[i][j] / (1.0 - m[i][i]);
    }
    rep.mean_m1[j] = s;
  }
  if (r == 0.0) {
    rep.second_moment_abs_m1 = 0.0;
    return rep;
  }
  if (infinite) {
    rep.second_moment_abs_m1 = inf;
    return rep;
  }
  // One individual: Z = xi_m + sum_{k <= xi_c} Z_k, so
  // E Z^2 (1 - E xi_c) = E[(xi_m + E Z xi_c)^2] - (E Z)^2 E xi_c.
  // The law of Z does not depend on the type.
  const double n1 = law.base().mean();
  const double n2 = law.base().variance() + n1 * n1;
  const double ec = (1.0 - r) * n1;
  const double em = r * n1;
  const double ec2 = (1.0 - r) * (1.0 - r) * n2 + r * (1.0 - r) * n1;
  const double em2 = r * r * n2 + r * (1.0 - r) * n1;
  const double emc = r * (1.0 - r) * (n2 - n1);
  const double ez = em / (1.0 - ec);
  const double ez2 = (em2 + 2.0 * ez * emc + ez * ez * ec2 - ez * ez * ec) / (1.0 - ec);
  const double size = static_cast<double>(total(a));
  const double variance = ez2 - ez * ez;
  rep.second_moment_abs_m1 = size * variance + size * size * ez * ez;
  return rep;
}

void write_joint_pmf_records(std::ostream& os, const JointPmf& pmf) {
  if (pmf.entries.empty()) return;
  const std::size_t d = pmf.entries.begin()->first.first.size();
  os << "# ";
  for (std::size_t j = 0; j < d; ++j) os << "T" << j + 1 << '\t';
  for (std::size_t j = 0; j < d; ++j) os << "M" << j + 1 << '\t';
  os << "probability\n";
  auto old = os.precision(17);
  for (const auto& [key, p] : pmf.entries) {
    for (auto x : key.first) os << x << '\t';
    for (auto x : key.second) os << x << '\t';
    os << p << '\n';
  }
  os.precision(old);
}

}  // namespace mdnm
