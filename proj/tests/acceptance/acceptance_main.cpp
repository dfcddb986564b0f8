// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "mdnm/mdnm.hpp"
#include "mdnm/parallel.hpp"

namespace {

using namespace mdnm;

// Number of p-value checks sharing the 0.01 family level.
constexpr std::size_t kPValueTests = 5;
constexpr double kLevel = 0.01;

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  std::string id;
  std::string title;
  double budget_seconds;
  std::function<Outcome()> run;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

bool adjusted_ok(double p) { return bonferroni(p, kPValueTests) > kLevel; }

std::vector<OffspringLaw> matrix_laws() {
  // Every nonempty support in {0, 1, 2, 3}, with a flat and a skewed pmf.
  std::vector<OffspringLaw> laws;
  for (int mask = 1; mask < 16; ++mask) {
    std::vector<std::int64_t> support;
    for (int k = 0; k < 4; ++k)
      if (mask & (1 << k)) support.push_back(k);
    std::vector<OffspringLaw::Atom> flat, skew;
    double z = 0.0;
    for (std::size_t j = 0; j < support.size(); ++j) z += static_cast<double>(j + 1);
    for (std::size_t j = 0; j < support.size(); ++j) {
      flat.push_back({support[j], 1.0 / static_cast<double>(support.size())});
      skew.push_back({support[j], static_cast<double>(j + 1) / z});
    }
    laws.push_back(OffspringLaw::from_pmf(flat));
    if (support.size() > 1) laws.push_back(OffspringLaw::from_pmf(skew));
  }
  return laws;
}

std::vector<CountVector> small_starts(std::size_t d) {
  std::vector<CountVector> out;
  for (std::size_t i = 0; i < d; ++i) {
    out.push_back(unit_vector(d, i));
    out.push_back(unit_vector(d, i, 2));
    for (std::size_t j = i + 1; j < d; ++j) {
      CountVector v(d, 0);
      v[i] = v[j] = 1;
      out.push_back(v);
    }
  }
  return out;
}

Outcome ac1_exact_oracle() {
  double worst = 0.0;
  std::size_t cases = 0;
  for (const auto& base : matrix_laws())
    for (std::size_t d : {2u, 3u})
      for (double r : {0.0, 0.25, 0.5, 1.0}) {
        MotherDependentLaw law(base, d, r);
        for (const auto& a : small_starts(d)) {
          auto pmf = exact_joint_pmf(law, a, 8, {0.0});
          auto oracle = enumerate_joint_law(law, a, 8);
          for (const auto& [key, p] : oracle) {
            auto it = pmf.entries.find(key);
            worst = std::max(worst, std::abs(p - (it == pmf.entries.end() ? 0.0 : it->second)));
          }
          for (const auto& [key, p] : pmf.entries) {
            auto it = oracle.find(key);
            worst = std::max(worst, std::abs(p - (it == oracle.end() ? 0.0 : it->second)));
          }
          ++cases;
        }
      }
  return {worst <= 1e-10, fmt("%zu cases, max |diff| %.2e", cases, worst)};
}

Outcome ac2_classical_progeny() {
  MotherDependentLaw law(OffspringLaw::critical_binary(), 2, 0.0);
  CountVector a{1, 0};
  auto pmf = exact_joint_pmf(law, a, 5);
  const double target[3] = {0.5, 0.125, 0.0625};
  bool ok = true;
  std::string detail;
  for (int k = 0; k < 3; ++k) {
    double p = pmf.entries[{CountVector{2 * k + 1, 0}, CountVector{0, 0}}];
    ok = ok && std::abs(p - target[k]) < 1e-15;
  }
  // Trees larger than the cap are counted as T_0 > 5 without being grown.
  const std::size_t n = 1'000'000;
  std::size_t counts[3] = {0, 0, 0};
  Rng rng = make_stream(2002, 0);
  SimulationCaps caps;
  caps.max_nodes = 16;
  for (std::size_t rep = 0; rep < n; ++rep) {
    try {
      auto size = simulate_forest(law, a, caps, rng).size();
      if (size == 1) ++counts[0];
      if (size == 3) ++counts[1];
      if (size == 5) ++counts[2];
    } catch (const CapExceeded&) {
    }
  }
  for (int k = 0; k < 3; ++k) {
    double freq = static_cast<double>(counts[k]) / n;
    double sd = std::sqrt(target[k] * (1 - target[k]) / n);
    ok = ok && std::abs(freq - target[k]) <= 3 * sd;
    detail += fmt("P(T0=%d) exact %.4f sim %.5f (%.2f sd); ", 2 * k + 1, target[k], freq,
                  (freq - target[k]) / sd);
  }
  return {ok, detail};
}

Outcome ac3_walk_coding() {
  // (a) pathwise on 10^4 forests.
  std::size_t forests = 0, mismatches = 0;
  Rng rng = make_stream(2003, 0);
  SimulationCaps caps;
  caps.max_nodes = 5000;
  auto laws = matrix_laws();
  const double rates[4] = {0.0, 0.25, 0.5, 1.0};
  for (std::size_t attempt = 0; forests < 10'000; ++attempt) {
    const auto& base = laws[attempt % laws.size()];
    std::size_t d = 2 + attempt % 2;
    MotherDependentLaw law(base, d, rates[(attempt / 2) % 4]);
    auto starts = small_starts(d);
    const auto& a = starts[(attempt / 3) % starts.size()];
    ColoredForest f;
    try {
      f = simulate_forest(law, a, caps, rng);
    } catch (const CapExceeded&) {
      continue;
    }
    ++forests;
    for (std::uint32_t t = 0; t < d; ++t) {
      std::int64_t count = 0;
      for (const auto& node : f.nodes()) count += node.type == t && node.allelic_generation == 0;
      auto tau = first_hitting_time(walk_from_subforest(f, t));
      if (!tau || static_cast<std::int64_t>(*tau) != count) ++mismatches;
    }
  }
  // (b) law of (T_0, M_1) from forests against the walk sampler.
  auto base = OffspringLaw::from_pmf({{0, 0.4}, {1, 0.2}, {2, 0.3}, {3, 0.1}});
  MotherDependentLaw law(base, 3, 0.25);
  CountVector a{1, 1, 0};
  const std::size_t n = 100'000;
  std::vector<GenerationPair> tree(n), walk(n);
  SimulationCaps gen0;
  gen0.max_allelic_generation = 0;
  parallel_for(n, default_threads(), [&](std::size_t k) {
    Rng r1 = make_stream(2103, 2 * k), r2 = make_stream(2103, 2 * k + 1);
    tree[k] = extract_chain(simulate_forest(law, a, gen0, r1)).entries.at(0);
    walk[k] = to_generation_pair(sample_hitting(law, a, r2));
  });
  std::map<GenerationPair, std::size_t> ta, wa;
  for (std::size_t k = 0; k < n; ++k) {
    ++ta[tree[k]];
    ++wa[walk[k]];
  }
  auto test = chi_square_homogeneity(ta, wa);
  bool ok = mismatches == 0 && adjusted_ok(test.p_value);
  return {ok, fmt("(a) %zu forests, %zu mismatches; (b) chi2 %.2f on %zu cells, p %.4f "
                  "(adjusted %.4f)",
                  forests, mismatches, test.statistic, test.cells, test.p_value,
                  bonferroni(test.p_value, kPValueTests))};
}

Outcome ac4_allele_identities() {
  std::size_t forests = 0, mismatches = 0;
  Rng rng = make_stream(2004, 0);
  SimulationCaps caps;
  caps.max_nodes = 5000;
  auto laws = matrix_laws();
  const double rates[4] = {0.0, 0.25, 0.5, 1.0};
  for (std::size_t attempt = 0; forests < 10'000; ++attempt) {
    const auto& base = laws[attempt % laws.size()];
    std::size_t d = 2 + attempt % 2;
    MotherDependentLaw law(base, d, rates[(attempt / 2) % 4]);
    auto starts = small_starts(d);
    const auto& a = starts[(attempt / 3) % starts.size()];
    ColoredForest f;
    try {
      f = simulate_forest(law, a, caps, rng);
    } catch (const CapExceeded&) {
      continue;
    }
    ++forests;
    std::size_t root_types = 0;
    for (auto x : a) root_types += x > 0;
    auto tree = root_types == 1 ? build_allele_tree(f) : build_allele_forest(f);
    if (aggregate_levels(tree) != extract_chain(f).entries) ++mismatches;
  }
  std::ifstream in(std::string(MDNM_FIXTURE_DIR) + "/worked_forest.tsv");
  auto forest = read_forest_records(in);
  std::ostringstream produced;
  write_allele_records(produced, build_allele_tree(forest));
  std::ifstream golden_in(std::string(MDNM_FIXTURE_DIR) + "/worked_allele_tree.tsv");
  std::ostringstream golden;
  golden << golden_in.rdbuf();
  bool golden_ok = produced.str() == golden.str();
  return {mismatches == 0 && golden_ok,
          fmt("%zu forests, %zu chain mismatches; golden allele tree %s", forests, mismatches,
              golden_ok ? "identical" : "DIFFERS")};
}

Outcome ac5_moments() {
  struct Case {
    const char* name;
    MotherDependentLaw law;
  };
  std::vector<Case> cases{
      {"subcritical",
       MotherDependentLaw(OffspringLaw::from_pmf({{0, 0.5}, {1, 0.2}, {2, 0.2}, {3, 0.1}}), 3,
                          0.3)},
      {"critical", MotherDependentLaw(OffspringLaw::critical_binary(), 3, 0.25)},
  };
  CountVector a{2, 1, 0};
  const std::size_t n = 100'000;
  bool ok = true;
  std::string detail;
  for (const auto& c : cases) {
    auto m = moments(c.law, a);
    std::vector<HittingRecord> recs(n);
    parallel_for(n, default_threads(), [&](std::size_t k) {
      Rng rng = make_stream(2005, k);
      recs[k] = sample_hitting(c.law, a, rng);
    });
    std::vector<std::vector<double>> series(4, std::vector<double>(n));
    for (std::size_t k = 0; k < n; ++k) {
      auto pair = to_generation_pair(recs[k]);
      for (std::size_t i = 0; i < 3; ++i) series[i][k] = static_cast<double>(pair.clones[i]);
      series[3][k] = static_cast<double>(total(pair.mutants));
    }
    std::vector<double> expected{m.mean_t0[0], m.mean_t0[1], m.mean_t0[2],
                                 m.mean_m1[0] + m.mean_m1[1] + m.mean_m1[2]};
    const char* names[4] = {"T0(1)", "T0(2)", "T0(3)", "|M1|"};
    detail += std::string(c.name) + ": ";
    for (std::size_t s = 0; s < 4; ++s) {
      double mean = 0.0, sq = 0.0;
      for (double x : series[s]) mean += x;
      mean /= n;
      for (double x : series[s]) sq += (x - mean) * (x - mean);
      double se = std::sqrt(sq / (n - 1) / n);
      double z = se > 0 ? (mean - expected[s]) / se : (mean == expected[s] ? 0.0 : INFINITY);
      ok = ok && std::abs(z) <= 3.0;
      detail += fmt("%s %.4f vs %.4f (%.2f se) ", names[s], mean, expected[s], z);
    }
  }
  return {ok, detail};
}

Outcome ac6_lemma4() {
  ScalingSetup setup;
  auto r = run_lemma4_experiment(setup, 10'000, 2006, default_threads());
  bool ok = adjusted_ok(r.ks_clones.p_value) && std::abs(r.mean_clones - 1.0) <= 0.05 &&
            r.correlation > 0.95;
  return {ok, fmt("KS D %.4f p %.4f (adjusted %.4f), mean %.4f, corr %.4f; mutant KS p %.4f, "
                  "binned chi2 p %.4f",
                  r.ks_clones.statistic, r.ks_clones.p_value,
                  bonferroni(r.ks_clones.p_value, kPValueTests), r.mean_clones, r.correlation,
                  r.ks_mutants.p_value, r.binned_clones.p_value)};
}

Outcome ac7_nu() {
  LimitParams p;
  double mean = nu_integral(p, [](double z) { return z; });
  double laplace = nu_integral(p, [](double z) { return -std::expm1(-z); });
  double worst = 0.0;
  for (double eps = 1e-8; eps <= 10.0; eps *= 1.5) {
    double closed = nu_tail(p, eps);
    worst = std::max(worst, std::abs(nu_tail_quadrature(p, eps) - closed) / closed);
  }
  bool ok = std::abs(mean - 1.0) <= 1e-8 && std::abs(laplace - (std::sqrt(3.0) - 1.0)) <= 1e-8 &&
            worst <= 1e-9;
  return {ok, fmt("int z nu = 1 %+.2e, int (1-e^-z) nu = sqrt3-1 %+.2e, tail rel err %.2e",
                  mean - 1.0, laplace - (std::sqrt(3.0) - 1.0), worst)};
}

Outcome ac8_offspring_sampler() {
  LimitParams p;
  TruncatedNuSampler sampler(p, 1e-6);
  const std::size_t n = 100'000;
  std::vector<double> sums(10'000);
  std::vector<std::int64_t> big(n);
  parallel_for(n, default_threads(), [&](std::size_t k) {
    Rng rng = make_stream(2008, k);
    auto atoms = sample_csbp_offspring(sampler, 1.0, rng);
    std::int64_t c = 0;
    double s = 0.0;
    for (double x : atoms) {
      s += x;
      c += x > 0.1;
    }
    big[k] = c;
    if (k < sums.size()) sums[k] = s;
  });
  IGParams law{1.0, p.c * p.c / p.sigma2};
  auto ks = ks_one_sample(sums, [&](double t) { return ig_cdf(law, t); });
  double lambda = nu_tail(p, 0.1);
  double mean = 0.0;
  std::map<std::int64_t, std::size_t> counts;
  for (auto c : big) {
    mean += static_cast<double>(c);
    ++counts[c];
  }
  mean /= n;
  std::map<std::int64_t, double> poisson;
  double pk = std::exp(-lambda);
  for (std::int64_t k = 0; k < 40; ++k) {
    poisson[k] = pk;
    pk *= lambda / static_cast<double>(k + 1);
  }
  auto chi = chi_square_table(counts, poisson, n);
  bool ok = adjusted_ok(ks.p_value) && std::abs(mean / lambda - 1.0) <= 0.02 &&
            adjusted_ok(chi.p_value);
  return {ok, fmt("sum KS D %.4f p %.4f; count mean %.4f vs %.4f (%+.2f%%), Poisson chi2 p %.4f",
                  ks.statistic, ks.p_value, mean, lambda, 100.0 * (mean / lambda - 1.0),
                  chi.p_value)};
}

Outcome ac9_theorem1() {
  ScalingSetup setup;
  Theorem1Options opts;
  auto r = run_theorem1_experiment(setup, 10'000, 2009, default_threads(), opts);
  bool ok = std::abs(r.intensity_ratio - 1.0) <= 0.10 && adjusted_ok(r.ks_child_masses.p_value);
  std::string bins;
  for (const auto& b : r.bins) {
    ok = ok && std::abs(b.ratio - 1.0) <= 0.10;
    bins += fmt(" %.3f", b.ratio);
  }
  return {ok, fmt("intensity ratio %.4f (%zu obs / %.1f exp), by root mass:%s; child-mass KS "
                  "p %.4f (adjusted %.4f); root KS p %.4f, count-law p %.4f",
                  r.intensity_ratio, r.observed_count, r.expected_count, bins.c_str(),
                  r.ks_child_masses.p_value, bonferroni(r.ks_child_masses.p_value, kPValueTests),
                  r.ks_root.p_value, r.count_law.p_value)};
}

// Each experiment twice with the same seed (and different thread counts);
// the report bytes must agree.
Outcome ac10_determinism() {
  std::vector<std::pair<std::string, std::function<std::string(unsigned)>>> runs;
  runs.emplace_back("simulate", [](unsigned) {
    MotherDependentLaw law(OffspringLaw::critical_binary(), 3, 0.2);
    Rng rng = make_stream(2010, 0);
    CountVector a{2, 0, 1};
    SimulationCaps caps;
    caps.max_nodes = 100'000;
    std::ostringstream os;
    write_forest_records(os, simulate_forest(law, a, caps, rng));
    return os.str();
  });
  runs.emplace_back("exact", [](unsigned) {
    MotherDependentLaw law(OffspringLaw::critical_binary(), 2, 0.3);
    CountVector a{1, 1};
    std::ostringstream os;
    write_joint_pmf_records(os, exact_joint_pmf(law, a, 20));
    return os.str();
  });
  runs.emplace_back("lemma4", [](unsigned threads) {
    ScalingSetup s;
    std::ostringstream os;
    write_lemma4_report(os, s, 2010, run_lemma4_experiment(s, 1000, 2010, threads));
    return os.str();
  });
  runs.emplace_back("theorem1", [](unsigned threads) {
    ScalingSetup s;
    Theorem1Options o;
    std::ostringstream os;
    write_theorem1_report(os, s, 2010, o, run_theorem1_experiment(s, 500, 2010, threads, o));
    return os.str();
  });
  runs.emplace_back("csbp", [](unsigned) {
    LimitParams p;
    TruncatedNuSampler sampler(p, 1e-4);
    Rng rng = make_stream(2010, 0);
    CSBPOptions o;
    o.depth = 2;
    std::ostringstream os;
    write_csbp_records(os, sample_tree_csbp(p, sampler, o, rng));
    return os.str();
  });
  runs.emplace_back("markov", [](unsigned threads) {
    MotherDependentLaw law(OffspringLaw::critical_binary(), 2, 0.3);
    MarkovTestOptions o;
    o.threads = threads;
    auto r = markov_transition_test(law, CountVector{1, 1}, 5000, 2010, o);
    std::ostringstream os;
    write_gof_record(os, "markov", "{}", "homogeneity", r.test);
    return os.str();
  });
  bool ok = true;
  std::string detail;
  for (auto& [name, fn] : runs) {
    bool same = fn(1) == fn(2);
    ok = ok && same;
    detail += name + (same ? " identical; " : " DIFFERS; ");
  }
  return {ok, detail};
}

}  // namespace

int main() {
  std::vector<Criterion> criteria{
      {"AC1", "exact pmf equals enumeration", 120, ac1_exact_oracle},
      {"AC2", "classical progeny law", 60, ac2_classical_progeny},
      {"AC3", "walk coding pathwise and in law", 180, ac3_walk_coding},
      {"AC4", "allele tree identities and golden file", 120, ac4_allele_identities},
      {"AC5", "first moments of (T0, M1)", 120, ac5_moments},
      {"AC6", "clone total scaling limit", 600, ac6_lemma4},
      {"AC7", "reproduction measure integrals", 10, ac7_nu},
      {"AC8", "offspring atom sampler", 120, ac8_offspring_sampler},
      {"AC9", "allele tree limit at depth 1", 1200, ac9_theorem1},
      {"AC10", "reports are reproducible", 1e9, ac10_determinism},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    bool in_budget = secs <= c.budget_seconds;
    bool pass = o.pass && in_budget;
    failures += !pass;
    std::printf("%-4s %s  %s: %s [%.1f s%s]\n", c.id.c_str(), pass ? "PASS" : "FAIL",
                c.title.c_str(), o.detail.c_str(), secs, in_budget ? "" : ", over budget");
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria failed\n", failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
