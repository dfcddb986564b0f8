#include "mdnm/gof.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/special_functions/gamma.hpp>

#include "mdnm/errors.hpp"

namespace mdnm {

double kolmogorov_survival(double lambda) {
  if (lambda <= 0.0) return 1.0;
  if (lambda < 1.0) {
    // Jacobi theta form of the cdf converges fast for small lambda.
    const double pi2 = std::numbers::pi * std::numbers::pi;
    double s = 0.0;
    for (int k = 1; k <= 50; ++k) {
      double j = 2.0 * k - 1.0;
      double term = std::exp(-j * j * pi2 / (8.0 * lambda * lambda));
      s += term;
      if (term < 1e-18) break;
    }
    double cdf = std::sqrt(2.0 * std::numbers::pi) / lambda * s;
    return std::clamp(1.0 - cdf, 0.0, 1.0);
  }
  double s = 0.0;
  for (int k = 1; k <= 100; ++k) {
    double term = std::exp(-2.0 * k * k * lambda * lambda);
    s += (k % 2 == 1 ? term : -term);
    if (term < 1e-18) break;
  }
  return std::clamp(2.0 * s, 0.0, 1.0);
}

double ks_p_value(double d_statistic, double effective_n) {
  double rn = std::sqrt(effective_n);
  return kolmogorov_survival((rn + 0.12 + 0.11 / rn) * d_statistic);
}

GofReport ks_one_sample(std::span<const double> samples,
                        const std::function<double(double)>& cdf) {
  if (samples.empty()) throw InvalidArgument("KS test needs at least one sample");
  std::vector<double> x(samples.begin(), samples.end());
  std::sort(x.begin(), x.end());
  const double n = static_cast<double>(x.size());
  double d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double f = cdf(x[i]);
    d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  return {d, ks_p_value(d, n), x.size(), x.size()};
}

GofReport ks_two_sample(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw InvalidArgument("KS test needs nonempty samples");
  std::vector<double> x(a.begin(), a.end()), y(b.begin(), b.end());
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  const double n = static_cast<double>(x.size()), m = static_cast<double>(y.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < x.size() && j < y.size()) {
    double v = std::min(x[i], y[j]);
    while (i < x.size() && x[i] == v) ++i;
    while (j < y.size() && y[j] == v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / n - static_cast<double>(j) / m));
  }
  double ne = n * m / (n + m);
  return {d, ks_p_value(d, ne), x.size() + y.size(), x.size() + y.size()};
}

double chi_square_survival(double statistic, double dof) {
  if (statistic <= 0.0) return 1.0;
  return boost::math::gamma_q(dof / 2.0, statistic / 2.0);
}

GofReport chi_square_cells(std::vector<ChiSquareCell> cells, ChiSquareCell tail, std::size_t n,
                           double min_expected) {
  std::vector<ChiSquareCell> kept;
  for (const auto& c : cells) {
    if (c.expected < min_expected) {
      tail.observed += c.observed;
      tail.expected += c.expected;
    } else {
      kept.push_back(c);
    }
  }
  if (tail.expected > 0.0 || tail.observed > 0.0) {
    while (tail.expected < min_expected && !kept.empty()) {
      auto smallest = std::min_element(kept.begin(), kept.end(),
                                       [](const auto& x, const auto& y) { return x.expected < y.expected; });
      tail.observed += smallest->observed;
      tail.expected += smallest->expected;
      kept.erase(smallest);
    }
    kept.push_back(tail);
  }
  if (kept.size() < 2) throw DegenerateTable("fewer than two cells after merging");
  double stat = 0.0;
  for (const auto& c : kept) {
    if (c.expected <= 0.0) {
      if (c.observed > 0.0) return {INFINITY, 0.0, n, kept.size()};
      continue;
    }
    double diff = c.observed - c.expected;
    stat += diff * diff / c.expected;
  }
  double dof = static_cast<double>(kept.size() - 1);
  return {stat, chi_square_survival(stat, dof), n, kept.size()};
}

GofReport chi_square_homogeneity_cells(std::vector<HomogeneityCell> cells, double min_expected) {
  double na = 0.0, nb = 0.0;
  for (const auto& c : cells) {
    na += c.a;
    nb += c.b;
  }
  const double ntot = na + nb;
  if (na <= 0.0 || nb <= 0.0) throw DegenerateTable("one of the samples is empty");
  auto small = [&](const HomogeneityCell& c) {
    double pooled = c.a + c.b;
    return std::min(pooled * na / ntot, pooled * nb / ntot);
  };
  std::vector<HomogeneityCell> kept;
  HomogeneityCell tail;
  bool has_tail = false;
  for (const auto& c : cells) {
    if (small(c) < min_expected) {
      tail.a += c.a;
      tail.b += c.b;
      has_tail = true;
    } else {
      kept.push_back(c);
    }
  }
  if (has_tail) {
    while (small(tail) < min_expected && !kept.empty()) {
      auto smallest = std::min_element(kept.begin(), kept.end(),
                                       [&](const auto& x, const auto& y) { return small(x) < small(y); });
      tail.a += smallest->a;
      tail.b += smallest->b;
      kept.erase(smallest);
    }
    kept.push_back(tail);
  }
  if (kept.size() < 2) throw DegenerateTable("fewer than two cells after merging");
  double stat = 0.0;
  for (const auto& c : kept) {
    double pooled = c.a + c.b;
    if (pooled <= 0.0) continue;
    double ea = pooled * na / ntot, eb = pooled * nb / ntot;
    stat += (c.a - ea) * (c.a - ea) / ea + (c.b - eb) * (c.b - eb) / eb;
  }
  double dof = static_cast<double>(kept.size() - 1);
  auto n = static_cast<std::size_t>(ntot);
  return {stat, chi_square_survival(stat, dof), n, kept.size()};
}

}  // namespace mdnm
