#include "mdnm/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <ostream>

#include <boost/math/distributions/poisson.hpp>
#include <json.hpp>

#include "mdnm/allele_tree.hpp"
#include "mdnm/errors.hpp"
#include "mdnm/parallel.hpp"

namespace mdnm {

using Json = nlohmann::ordered_json;

void validate(const ScalingSetup& s) {
  if (std::abs(s.base.mean() - 1.0) > 1e-12)
    throw InvalidArgument("scaling experiments need a critical base law (mean 1)");
  if (s.d < 2) throw InvalidArgument("d must be at least 2");
  if (s.type >= s.d) throw InvalidArgument("type index out of range");
  if (s.n < 1) throw InvalidArgument("n must be positive");
  if (!(s.c > 0.0) || s.c > static_cast<double>(s.n))
    throw InvalidArgument("need 0 < c <= n so that r = c/n is a probability");
}

MotherDependentLaw scaled_law(const ScalingSetup& s) {
  validate(s);
  return MotherDependentLaw(s.base, s.d, s.c / static_cast<double>(s.n));
}

LimitParams limit_params(const ScalingSetup& s) {
  validate(s);
  LimitParams p;
  p.c = s.c;
  p.sigma2 = s.base.variance();
  p.d = s.d;
  return p;
}

namespace {

double correlation(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    sxy += (x[k] - mx) * (y[k] - my);
    sxx += (x[k] - mx) * (x[k] - mx);
    syy += (y[k] - my) * (y[k] - my);
  }
  return sxy / std::sqrt(sxx * syy);
}

CountVector initial_vector(const ScalingSetup& s) { return unit_vector(s.d, s.type, s.n); }

// Smallest lattice point k/scale with cdf(k/scale) >= target.
double lattice_quantile(const std::function<double(double)>& cdf, double target, double scale) {
  double hi = 1.0;
  while (cdf(hi / scale) < target) hi *= 2.0;
  double lo = 0.0;
  while (hi - lo > 1.0) {
    double mid = std::floor((lo + hi) / 2.0);
    if (cdf(mid / scale) < target)
      lo = mid;
    else
      hi = mid;
  }
  return hi / scale;
}

GofReport binned_lattice_test(const std::vector<double>& samples,
                              const std::function<double(double)>& cdf, double scale,
                              std::size_t bins) {
  std::vector<double> edges;
  for (std::size_t b = 1; b < bins; ++b) {
    double e = lattice_quantile(cdf, static_cast<double>(b) / static_cast<double>(bins), scale);
    if (edges.empty() || e > edges.back()) edges.push_back(e);
  }
  std::vector<ChiSquareCell> cells(edges.size() + 1);
  const double n = static_cast<double>(samples.size());
  double prev = 0.0;
  for (std::size_t b = 0; b < edges.size(); ++b) {
    double f = cdf(edges[b]);
    cells[b].expected = (f - prev) * n;
    prev = f;
  }
  cells.back().expected = (1.0 - prev) * n;
  // Tolerance of half a lattice step guards against rounding in t / n^2.
  const double half = 0.5 / scale;
  for (double v : samples) {
    auto it = std::lower_bound(edges.begin(), edges.end(), v - half);
    ++cells[static_cast<std::size_t>(it - edges.begin())].observed;
  }
  return chi_square_cells(std::move(cells), ChiSquareCell{}, samples.size());
}

}  // namespace

Lemma4Report run_lemma4_experiment(const ScalingSetup& setup, std::size_t replicas,
                                   std::uint64_t seed, unsigned threads,
                                   const HittingOptions& hitting) {
  const auto law = scaled_law(setup);
  const auto params = limit_params(setup);
  if (replicas < 2) throw InvalidArgument("need at least two replicas");
  const CountVector a = initial_vector(setup);
  const std::size_t other = setup.type == 0 ? 1 : 0;
  const double n = static_cast<double>(setup.n);

  Lemma4Report rep;
  rep.replicas = replicas;
  rep.clones.resize(replicas);
  rep.mutants.resize(replicas);
  parallel_for(replicas, threads, [&](std::size_t k) {
    Rng rng = make_stream(seed, k);
    CountVector x(setup.d, 0);
    auto tau = sample_clone_walk(law, setup.type, a[setup.type], rng, x, hitting);
    rep.clones[k] = static_cast<double>(tau) / (n * n);
    rep.mutants[k] = static_cast<double>(x[other]) / n;
  });

  const IGParams theta = theta_law(params);
  const double scale = params.c / static_cast<double>(params.d - 1);
  rep.ks_clones = ks_one_sample(rep.clones, [&](double t) { return ig_cdf(theta, t); });
  rep.ks_mutants =
      ks_one_sample(rep.mutants, [&](double t) { return ig_cdf(theta, t / scale); });
  rep.binned_clones = binned_lattice_test(
      rep.clones, [&](double t) { return ig_cdf(theta, t); }, n * n, 20);
  rep.mean_clones =
      std::accumulate(rep.clones.begin(), rep.clones.end(), 0.0) / static_cast<double>(replicas);
  rep.correlation = correlation(rep.clones, rep.mutants);
  return rep;
}

Theorem1Report run_theorem1_experiment(const ScalingSetup& setup, std::size_t replicas,
                                       std::uint64_t seed, unsigned threads,
                                       const Theorem1Options& options) {
  const auto law = scaled_law(setup);
  const auto params = limit_params(setup);
  if (replicas < 2) throw InvalidArgument("need at least two replicas");
  if (options.depth < 1 || options.depth > 3) throw InvalidArgument("depth must be 1, 2 or 3");
  if (!(options.threshold > 0.0)) throw InvalidArgument("threshold must be positive");
  const CountVector a = initial_vector(setup);
  const double n2 = static_cast<double>(setup.n) * static_cast<double>(setup.n);
  const double x = options.threshold;

  struct PerReplica {
    double root = 0.0;
    // Masses of the depth-1 children above the threshold.
    std::vector<double> above;
    // Per depth k >= 1: sum of parent masses at depth k-1 and count above x.
    std::vector<double> parent_mass;
    std::vector<std::size_t> count;
  };
  std::vector<PerReplica> results(replicas);
  parallel_for(replicas, threads, [&](std::size_t k) {
    Rng rng = make_stream(seed, k);
    auto sketch = sample_allele_sketch(law, a, options.depth, rng, options.hitting);
    PerReplica& out = results[k];
    out.parent_mass.assign(options.depth + 1, 0.0);
    out.count.assign(options.depth + 1, 0);
    out.root = static_cast<double>(sketch.nodes[0].record.size) / n2;
    for (const auto& node : sketch.nodes) {
      const double mass = static_cast<double>(node.record.size) / n2;
      if (node.depth < options.depth) out.parent_mass[node.depth + 1] += mass;
      if (node.depth >= 1 && mass > x) {
        ++out.count[node.depth];
        if (node.depth == 1) out.above.push_back(mass);
      }
    }
  });

  Theorem1Report rep;
  rep.replicas = replicas;
  rep.threshold = x;
  rep.limit_tail = nu_tail(params, x);
  const double tail = rep.limit_tail;
  const IGParams theta = theta_law(params);

  for (const auto& r : results) rep.root_masses.push_back(r.root);
  rep.ks_root = ks_one_sample(rep.root_masses, [&](double t) { return ig_cdf(theta, t); });

  for (const auto& r : results) {
    rep.expected_count += r.root * tail;
    rep.observed_count += r.above.size();
    rep.child_masses.insert(rep.child_masses.end(), r.above.begin(), r.above.end());
  }
  rep.intensity_ratio = static_cast<double>(rep.observed_count) / rep.expected_count;

  // Conditional intensity by root-mass bins of equal replica counts.
  std::vector<std::size_t> order(replicas);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return results[i].root < results[j].root; });
  const std::size_t bins = std::max<std::size_t>(1, std::min(options.mass_bins, replicas));
  for (std::size_t b = 0; b < bins; ++b) {
    std::size_t lo = b * replicas / bins, hi = (b + 1) * replicas / bins;
    if (lo == hi) continue;
    IntensityBin bin;
    bin.mass_low = results[order[lo]].root;
    bin.mass_high = results[order[hi - 1]].root;
    bin.replicas = hi - lo;
    for (std::size_t k = lo; k < hi; ++k) {
      bin.expected += results[order[k]].root * tail;
      bin.observed += results[order[k]].above.size();
    }
    bin.ratio = static_cast<double>(bin.observed) / bin.expected;
    rep.bins.push_back(bin);
  }

  // Count law: sum over replicas of Poisson(m tail) cell probabilities.
  std::size_t max_count = 0;
  for (const auto& r : results) max_count = std::max(max_count, r.above.size());
  std::vector<ChiSquareCell> cells(max_count + 1);
  for (const auto& r : results) {
    ++cells[r.above.size()].observed;
    const double lambda = r.root * tail;
    if (lambda <= 0.0) {
      cells[0].expected += 1.0;
      continue;
    }
    boost::math::poisson_distribution<double> pois(lambda);
    for (std::size_t k = 0; k <= max_count; ++k) cells[k].expected += boost::math::pdf(pois, static_cast<double>(k));
  }
  ChiSquareCell tail_cell;
  {
    double assigned = 0.0;
    for (const auto& c : cells) assigned += c.expected;
    tail_cell.expected = std::max(0.0, static_cast<double>(replicas) - assigned);
  }
  rep.count_law = chi_square_cells(cells, tail_cell, replicas);

  if (!rep.child_masses.empty()) {
    TruncatedNuSampler truncated(params, x, 16);
    rep.ks_child_masses =
        ks_one_sample(rep.child_masses, [&](double z) { return truncated.cdf(z); });
  }

  // Largest depth-1 mass: P(max < z | m) = exp(-m nu([z, inf))).
  std::vector<double> pit;
  for (const auto& r : results) {
    if (r.above.empty()) continue;
    double z = *std::max_element(r.above.begin(), r.above.end());
    pit.push_back(std::exp(-r.root * nu_tail(params, z)));
  }
  if (!pit.empty()) {
    // Only replicas whose largest child exceeds x are kept, so the
    // transform is uniform on [exp(-m tail), 1]; rescale per replica.
    std::size_t idx = 0;
    for (const auto& r : results) {
      if (r.above.empty()) continue;
      double floor = std::exp(-r.root * tail);
      pit[idx] = (pit[idx] - floor) / (1.0 - floor);
      ++idx;
    }
    rep.ks_largest_child = ks_one_sample(pit, [](double u) { return std::clamp(u, 0.0, 1.0); });
  }

  for (std::uint32_t k = 1; k <= options.depth; ++k) {
    LevelIntensity level;
    level.depth = k;
    for (const auto& r : results) {
      level.expected += r.parent_mass[k] * tail;
      level.observed += r.count[k];
    }
    level.ratio = static_cast<double>(level.observed) / level.expected;
    rep.levels.push_back(level);
  }
  return rep;
}

namespace {

Json gof_json(const GofReport& g) {
  Json j;
  j["statistic"] = g.statistic;
  j["p_value"] = g.p_value;
  j["sample_size"] = g.sample_size;
  j["cells_or_points"] = g.cells;
  return j;
}

Json setup_json(const ScalingSetup& s, std::uint64_t seed) {
  Json p;
  p["c"] = s.c;
  p["sigma2"] = s.base.variance();
  p["d"] = s.d;
  p["type"] = s.type + 1;
  p["n"] = s.n;
  p["r"] = s.c / static_cast<double>(s.n);
  p["seed"] = seed;
  return p;
}

}  // namespace

void write_gof_record(std::ostream& os, const std::string& experiment,
                      const std::string& parameters_json, const std::string& test_name,
                      const GofReport& report) {
  Json j;
  j["experiment"] = experiment;
  j["parameters"] = Json::parse(parameters_json);
  j["test"] = test_name;
  j["result"] = gof_json(report);
  os << j.dump() << '\n';
}

void write_lemma4_report(std::ostream& os, const ScalingSetup& setup, std::uint64_t seed,
                         const Lemma4Report& report) {
  Json j;
  j["experiment"] = "lemma4";
  j["parameters"] = setup_json(setup, seed);
  j["parameters"]["replicas"] = report.replicas;
  j["tests"]["ks_clones_vs_theta"] = gof_json(report.ks_clones);
  j["tests"]["ks_mutants_vs_scaled_theta"] = gof_json(report.ks_mutants);
  j["tests"]["binned_clones_vs_theta"] = gof_json(report.binned_clones);
  j["summary"]["mean_clones"] = report.mean_clones;
  j["summary"]["correlation"] = report.correlation;
  os << j.dump() << '\n';
}

void write_theorem1_report(std::ostream& os, const ScalingSetup& setup, std::uint64_t seed,
                           const Theorem1Options& options, const Theorem1Report& report) {
  Json j;
  j["experiment"] = "theorem1";
  j["parameters"] = setup_json(setup, seed);
  j["parameters"]["replicas"] = report.replicas;
  j["parameters"]["depth"] = options.depth;
  j["parameters"]["threshold"] = options.threshold;
  j["tests"]["ks_root_mass"] = gof_json(report.ks_root);
  j["tests"]["count_law"] = gof_json(report.count_law);
  j["tests"]["ks_child_masses"] = gof_json(report.ks_child_masses);
  j["tests"]["ks_largest_child"] = gof_json(report.ks_largest_child);
  j["summary"]["limit_tail"] = report.limit_tail;
  j["summary"]["expected_count"] = report.expected_count;
  j["summary"]["observed_count"] = report.observed_count;
  j["summary"]["intensity_ratio"] = report.intensity_ratio;
  Json bins = Json::array();
  for (const auto& b : report.bins)
    bins.push_back({{"mass_low", b.mass_low},
                    {"mass_high", b.mass_high},
                    {"replicas", b.replicas},
                    {"expected", b.expected},
                    {"observed", b.observed},
                    {"ratio", b.ratio}});
  j["summary"]["bins"] = bins;
  Json levels = Json::array();
  for (const auto& l : report.levels)
    levels.push_back({{"depth", l.depth},
                      {"expected", l.expected},
                      {"observed", l.observed},
                      {"ratio", l.ratio}});
  j["summary"]["levels"] = levels;
  os << j.dump() << '\n';
}

void write_timing_record(std::ostream& os, const std::string& experiment, double seconds) {
  Json j;
  j["experiment"] = experiment;
  j["runtime_s"] = seconds;
  os << j.dump() << '\n';
}

void write_histogram(std::ostream& os, const std::vector<double>& values, std::size_t bins,
                     double lo, double hi) {
  if (bins == 0 || !(hi > lo)) throw InvalidArgument("histogram needs bins > 0 and hi > lo");
  std::vector<std::size_t> counts(bins, 0);
  const double width = (hi - lo) / static_cast<double>(bins);
  for (double v : values) {
    if (v < lo || v > hi) continue;
    auto b = static_cast<std::size_t>((v - lo) / width);
    if (b >= bins) b = bins - 1;
    ++counts[b];
  }
  os << "# left\tright\tcount\n";
  auto old = os.precision(12);
  for (std::size_t b = 0; b < bins; ++b)
    os << lo + width * static_cast<double>(b) << '\t' << lo + width * static_cast<double>(b + 1)
       << '\t' << counts[b] << '\n';
  os.precision(old);
}

}  // namespace mdnm
