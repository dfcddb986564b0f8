#include "commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <numeric>
#include <sstream>

namespace mdnm::cli {

using Json = nlohmann::ordered_json;

namespace {

class Output {
 public:
  explicit Output(const RunConfig& config) : dir_(config.out) {
    std::filesystem::create_directories(dir_);
    report_ = file("report.jsonl");
    timing_ = file("timing.jsonl");
  }

  std::ofstream file(const std::string& name) const {
    std::ofstream f(dir_ / name);
    if (!f) throw Error("cannot write " + (dir_ / name).string());
    return f;
  }

  std::ostream& report() { return report_; }
  std::ostream& timing() { return timing_; }

 private:
  std::filesystem::path dir_;
  std::ofstream report_;
  std::ofstream timing_;
};

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

// JSON has no infinities.
Json number(double x) {
  if (std::isfinite(x)) return x;
  if (std::isnan(x)) return "nan";
  return x > 0 ? "inf" : "-inf";
}

Json gof(const GofReport& g) {
  return {{"statistic", g.statistic},
          {"p_value", g.p_value},
          {"sample_size", g.sample_size},
          {"cells_or_points", g.cells}};
}

Json law_parameters(const RunConfig& c) {
  Json p;
  p["seed"] = c.seed;
  p["d"] = c.d;
  p["r"] = c.r;
  p["offspring_mean"] = c.base.mean();
  p["offspring_variance"] = number(c.base.variance());
  p["initial"] = c.initial;
  return p;
}

std::vector<double> number_list(const RunConfig& c, const std::string& section,
                                 const std::string& key, std::vector<double> fallback) {
  auto s = c.json.find(section);
  if (s == c.json.end() || !s->contains(key)) return fallback;
  const auto& v = (*s)[key];
  std::vector<double> out;
  if (!v.is_array() || v.empty()) throw c.error(section + "." + key, "expected a nonempty list of numbers");
  for (const auto& x : v) {
    if (!x.is_number()) throw c.error(section + "." + key, "expected a nonempty list of numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

void print_test(const std::string& name, const GofReport& g) {
  std::printf("  %-30s statistic %-12.6g p %.4g\n", name.c_str(), g.statistic, g.p_value);
}

ColoredForest obtain_forest(const RunConfig& c) {
  if (c.forest) {
    std::ifstream in(*c.forest);
    if (!in) throw ConfigError("forest", "cannot open " + c.forest->string());
    try {
      return read_forest_records(in);
    } catch (const ConfigError& e) {
      throw ConfigError(e.field(), c.forest->filename().string() + ": " + e.message(), e.line());
    }
  }
  if (c.initial.empty())
    throw c.error("initial", "missing: give initial, a scaling block or a forest file");
  Rng rng = make_stream(c.seed, 0);
  return simulate_forest(c.law(), c.initial, c.caps, rng);
}

AlleleTree allele_of(const RunConfig& c, const ColoredForest& forest) {
  std::optional<std::uint32_t> depth = c.caps.max_allelic_generation;
  auto s = c.json.find("allele_tree");
  if (s != c.json.end() && s->contains("max_depth"))
    depth = c.option<std::uint32_t>("allele_tree", "max_depth", 0, 0);
  bool single = true;
  for (auto root : forest.roots())
    single = single && forest.node(root).type == forest.node(forest.roots()[0]).type;
  try {
    return single ? build_allele_tree(forest, depth) : build_allele_forest(forest, depth);
  } catch (const InvalidArgument& e) {
    throw c.error("allele_tree.max_depth", e.what());
  }
}

void write_allele_files(const Output& out, const AlleleTree& tree) {
  auto tsv = out.file("allele_tree.tsv");
  write_allele_records(tsv, tree);
  auto dot = out.file("allele_tree.dot");
  write_allele_dot(dot, tree);
}

Json forest_summary(const ColoredForest& forest) {
  return {{"nodes", forest.size()},
          {"trees", forest.tree_count()},
          {"levels", level_counts(forest).size()},
          {"complete", forest.complete()}};
}

int forest_command(const RunConfig& c, bool full_export) {
  Stopwatch clock;
  Output out(c);
  const ColoredForest forest = obtain_forest(c);
  const AlleleTree tree = allele_of(c, forest);
  write_allele_files(out, tree);

  Json j;
  j["experiment"] = full_export ? "simulate" : "allele_tree";
  j["parameters"] = c.forest ? Json{{"forest", c.forest->filename().string()}} : law_parameters(c);
  j["summary"] = forest_summary(forest);
  j["summary"]["allele_nodes"] = tree.nodes().size();

  if (full_export) {
    auto ftsv = out.file("forest.tsv");
    write_forest_records(ftsv, forest);
    auto fdot = out.file("forest.dot");
    write_forest_dot(fdot, forest);
    const CloneMutantChain chain = extract_chain(forest);
    auto ctsv = out.file("chain.tsv");
    write_chain_records(ctsv, chain);
    j["summary"]["allelic_generations"] = chain.entries.size();
    j["summary"]["chain_complete"] = chain.complete;
  }
  out.report() << j.dump() << '\n';
  write_timing_record(out.timing(), j["experiment"].get<std::string>(), clock.seconds());

  std::printf("nodes %zu  trees %zu  levels %zu  allele nodes %zu",
              forest.size(), forest.tree_count(), j["summary"]["levels"].get<std::size_t>(),
              tree.nodes().size());
  if (full_export)
    std::printf("  allelic generations %zu", j["summary"]["allelic_generations"].get<std::size_t>());
  std::printf("%s\n", forest.complete() ? "" : "  (cut)");
  return kExitOk;
}

}  // namespace

int cmd_simulate(const RunConfig& config) { return forest_command(config, true); }

int cmd_allele_tree(const RunConfig& config) { return forest_command(config, false); }

int cmd_exact(const RunConfig& c) {
  Stopwatch clock;
  if (c.initial.empty()) throw c.error("initial", "missing");
  const auto law = c.law();
  const auto max_total = c.option<std::int64_t>("exact", "max_total", 20, 40);
  ExactOptions options;
  options.min_captured = c.option<double>("exact", "min_captured", 0.5, 0.5);
  const JointPmf pmf = exact_joint_pmf(law, c.initial, max_total, options);
  const MomentReport m = moments(law, c.initial);

  Output out(c);
  auto joint = out.file("joint_pmf.tsv");
  write_joint_pmf_records(joint, pmf);

  auto marginal = out.file("t0_pmf.tsv");
  marginal << "#";
  for (std::size_t j = 0; j < c.d; ++j) marginal << " T" << j + 1 << '\t';
  marginal << "probability\n";
  marginal.precision(17);
  for (const auto& [k, p] : clone_marginal(pmf)) {
    for (auto x : k) marginal << x << '\t';
    marginal << p << '\n';
  }

  const auto xs = number_list(c, "exact", "mgf_x", {0.25, 0.5, 0.75, 1.0});
  const auto ys = number_list(c, "exact", "mgf_y", {0.25, 0.5, 0.75, 1.0});
  auto mgf = out.file("mgf.tsv");
  mgf << "# x\ty\tmgf\ttruncated\n";
  mgf.precision(17);
  for (double x : xs)
    for (double y : ys) {
      std::vector<double> xv(c.d, x), yv(c.d, y);
      mgf << x << '\t' << y << '\t' << joint_mgf(law, c.initial, xv, yv) << '\t'
          << truncated_mgf(pmf, xv, yv) << '\n';
    }

  Json j;
  j["experiment"] = "exact";
  j["parameters"] = law_parameters(c);
  j["parameters"]["max_total"] = max_total;
  j["summary"]["entries"] = pmf.entries.size();
  j["summary"]["captured_mass"] = pmf.captured_mass;
  Json mean_t0 = Json::array(), mean_m1 = Json::array();
  for (double v : m.mean_t0) mean_t0.push_back(number(v));
  for (double v : m.mean_m1) mean_m1.push_back(number(v));
  j["summary"]["mean_t0"] = mean_t0;
  j["summary"]["mean_m1"] = mean_m1;
  j["summary"]["second_moment_abs_m1"] = number(m.second_moment_abs_m1);
  out.report() << j.dump() << '\n';
  write_timing_record(out.timing(), "exact", clock.seconds());

  std::printf("entries %zu  captured mass %.12g\n", pmf.entries.size(), pmf.captured_mass);
  for (std::size_t i = 0; i < c.d; ++i)
    std::printf("  type %zu  E T0 %.8g  E M1 %.8g\n", i + 1, m.mean_t0[i], m.mean_m1[i]);
  std::printf("  E |M1|^2 %.8g\n", m.second_moment_abs_m1);
  return kExitOk;
}

int cmd_limits_lemma4(const RunConfig& c) {
  Stopwatch clock;
  const ScalingSetup setup = limit_setup(c);
  const auto replicas = c.option<std::size_t>("limits", "replicas", 2000, 10'000);
  const auto bins = c.option<std::size_t>("limits", "bins", 60, 60);
  const auto rep = run_lemma4_experiment(setup, replicas, c.seed, c.worker_threads(), c.hitting);

  Output out(c);
  write_lemma4_report(out.report(), setup, c.seed, rep);
  auto h1 = out.file("clones_hist.tsv");
  write_histogram(h1, rep.clones, bins, 0.0, 6.0 / setup.c);
  auto h2 = out.file("mutants_hist.tsv");
  write_histogram(h2, rep.mutants, bins, 0.0, 6.0 / static_cast<double>(setup.d - 1));
  write_timing_record(out.timing(), "lemma4", clock.seconds());

  std::printf("lemma4  n %lld  replicas %zu\n", static_cast<long long>(setup.n), replicas);
  print_test("ks_clones_vs_theta", rep.ks_clones);
  print_test("ks_mutants_vs_scaled_theta", rep.ks_mutants);
  print_test("binned_clones_vs_theta", rep.binned_clones);
  std::printf("  mean_clones %.6g  correlation %.6g\n", rep.mean_clones, rep.correlation);
  return kExitOk;
}

int cmd_limits_theorem1(const RunConfig& c) {
  Stopwatch clock;
  const ScalingSetup setup = limit_setup(c);
  const auto replicas = c.option<std::size_t>("limits", "replicas", 1000, 10'000);
  const auto bins = c.option<std::size_t>("limits", "bins", 60, 60);
  Theorem1Options options;
  options.depth = c.option<std::uint32_t>("limits", "depth", 1, 1);
  options.threshold = c.option<double>("limits", "threshold", 0.1, 0.1);
  options.mass_bins = c.option<std::size_t>("limits", "mass_bins", 5, 5);
  options.hitting = c.hitting;
  Theorem1Report rep;
  try {
    rep = run_theorem1_experiment(setup, replicas, c.seed, c.worker_threads(), options);
  } catch (const InvalidArgument& e) {
    throw c.error("limits", e.what());
  }

  Output out(c);
  write_theorem1_report(out.report(), setup, c.seed, options, rep);
  auto h1 = out.file("root_mass_hist.tsv");
  write_histogram(h1, rep.root_masses, bins, 0.0, 6.0 / setup.c);
  auto h2 = out.file("child_mass_hist.tsv");
  write_histogram(h2, rep.child_masses, bins, options.threshold, options.threshold + 4.0);
  write_timing_record(out.timing(), "theorem1", clock.seconds());

  std::printf("theorem1  n %lld  replicas %zu  depth %u\n", static_cast<long long>(setup.n),
              replicas, options.depth);
  print_test("ks_root_mass", rep.ks_root);
  print_test("count_law", rep.count_law);
  print_test("ks_child_masses", rep.ks_child_masses);
  print_test("ks_largest_child", rep.ks_largest_child);
  std::printf("  observed %zu  expected %.6g  ratio %.4f\n", rep.observed_count, rep.expected_count,
              rep.intensity_ratio);
  return kExitOk;
}

int cmd_limits_csbp(const RunConfig& c) {
  Stopwatch clock;
  const ScalingSetup setup = limit_setup(c);
  const LimitParams params = limit_params(setup);
  const auto samples = c.option<std::size_t>("limits", "samples", 100, 1000);
  const auto eps = c.option<double>("limits", "eps", 1e-4, 1e-6);
  const auto bins = c.option<std::size_t>("limits", "bins", 60, 60);
  CSBPOptions options;
  options.depth = c.option<std::uint32_t>("limits", "depth", 2, 2);
  options.max_children = c.option<std::size_t>("limits", "max_children", 16, 16);
  options.root_type = setup.type;
  auto s = c.json.find("limits");
  if (s != c.json.end() && s->contains("initial_mass"))
    options.initial_mass = c.option<double>("limits", "initial_mass", 1.0, 1.0);

  std::vector<CSBPSample> trees(samples);
  try {
    const TruncatedNuSampler sampler(params, eps);
    parallel_for(samples, c.worker_threads(), [&](std::size_t k) {
      Rng rng = make_stream(c.seed, k);
      trees[k] = sample_tree_csbp(params, sampler, options, rng);
    });
  } catch (const InvalidArgument& e) {
    throw c.error("limits", e.what());
  }

  Output out(c);
  auto tsv = out.file("csbp.tsv");
  std::vector<double> children;
  std::size_t nodes = 0;
  double bound = 0.0;
  for (std::size_t k = 0; k < trees.size(); ++k) {
    tsv << "# sample " << k << '\n';
    write_csbp_records(tsv, trees[k]);
    nodes += trees[k].nodes.size();
    bound = std::max(bound, trees[k].small_atom_bound);
    for (const auto& node : trees[k].nodes)
      if (node.path.size() == 1) children.push_back(node.mass);
  }
  auto hist = out.file("children_hist.tsv");
  write_histogram(hist, children, bins, eps, 4.0);

  Json j;
  j["experiment"] = "csbp";
  j["parameters"] = {{"c", params.c},     {"sigma2", params.sigma2}, {"d", params.d},
                     {"seed", c.seed},    {"samples", samples},      {"eps", eps},
                     {"depth", options.depth}, {"max_children", options.max_children}};
  if (options.initial_mass) j["parameters"]["initial_mass"] = *options.initial_mass;
  j["summary"]["nodes"] = nodes;
  j["summary"]["depth1_children"] = children.size();
  j["summary"]["max_small_atom_bound"] = bound;
  out.report() << j.dump() << '\n';
  write_timing_record(out.timing(), "csbp", clock.seconds());

  std::printf("csbp  samples %zu  nodes %zu  depth-1 children %zu\n", samples, nodes,
              children.size());
  return kExitOk;
}

int cmd_limits_ig(const RunConfig& c) {
  Stopwatch clock;
  const ScalingSetup setup = limit_setup(c);
  const LimitParams params = limit_params(setup);
  const IGParams theta = theta_law(params);
  const double edge = params.c * params.c / (2.0 * params.sigma2);
  std::vector<double> grid;
  for (double f : {-4.0, -2.0, -1.0, -0.5, 0.0, 0.2, 0.4, 0.6, 0.8, 0.9}) grid.push_back(f * edge);
  grid = number_list(c, "limits", "kappa_q", grid);
  const auto samples = c.option<std::size_t>("limits", "samples", 10'000, 100'000);
  const auto bins = c.option<std::size_t>("limits", "bins", 60, 60);

  Output out(c);
  auto kt = out.file("kappa.tsv");
  kt << "# q\tkappa\n";
  kt.precision(17);
  for (double q : grid) {
    double k;
    try {
      k = kappa(params, q);
    } catch (const DomainError& e) {
      throw c.error("limits.kappa_q", e.what());
    }
    kt << q << '\t' << k << '\n';
  }

  std::vector<double> draws(samples);
  parallel_for(samples, c.worker_threads(), [&](std::size_t k) {
    Rng rng = make_stream(c.seed, k);
    draws[k] = ig_sample(theta, rng);
  });
  auto hist = out.file("ig_hist.tsv");
  write_histogram(hist, draws, bins, 0.0, 8.0 * theta.mean);
  const GofReport ks = ks_one_sample(draws, [&](double t) { return ig_cdf(theta, t); });

  Json j;
  j["experiment"] = "ig";
  j["parameters"] = {{"c", params.c},     {"sigma2", params.sigma2}, {"ig_mean", theta.mean},
                     {"ig_shape", theta.shape}, {"seed", c.seed}, {"samples", samples}};
  j["tests"]["ks_samples_vs_ig"] = gof(ks);
  j["summary"]["sample_mean"] =
      std::accumulate(draws.begin(), draws.end(), 0.0) / static_cast<double>(samples);
  j["summary"]["kappa_points"] = grid.size();
  out.report() << j.dump() << '\n';
  write_timing_record(out.timing(), "ig", clock.seconds());

  std::printf("ig  mean %.6g  shape %.6g  samples %zu\n", theta.mean, theta.shape, samples);
  print_test("ks_samples_vs_ig", ks);
  return kExitOk;
}

namespace {

struct MarkovCase {
  CountVector v;
  std::optional<CountVector> start;
  std::optional<CountVector> previous;
};

std::vector<MarkovCase> markov_cases(const RunConfig& c, std::size_t d) {
  auto s = c.json.find("verify");
  if (s == c.json.end() || !s->contains("markov_cases")) {
    if (d != 2) throw c.error("verify.markov_cases", "required when law.d is not 2");
    return {{{1, 1}, std::nullopt, std::nullopt},
            {{0, 1}, CountVector{1, 0}, CountVector{2, 0}},
            {{0, 2}, CountVector{1, 0}, std::nullopt}};
  }
  const auto& list = (*s)["markov_cases"];
  const std::string field = "verify.markov_cases";
  if (!list.is_array() || list.empty()) throw c.error(field, "expected a nonempty list");
  auto vec = [&](const auto& x) {
    if (!x.is_array() || x.size() != d) throw c.error(field, "vectors must have length law.d");
    CountVector out;
    for (const auto& e : x) {
      if (!e.is_number_unsigned()) throw c.error(field, "expected nonnegative integers");
      out.push_back(e.template get<std::int64_t>());
    }
    return out;
  };
  std::vector<MarkovCase> cases;
  for (const auto& item : list) {
    if (!item.is_object() || !item.contains("v")) throw c.error(field, "each case needs \"v\"");
    MarkovCase mc;
    mc.v = vec(item["v"]);
    if (item.contains("start")) mc.start = vec(item["start"]);
    if (item.contains("previous_clones")) mc.previous = vec(item["previous_clones"]);
    cases.push_back(std::move(mc));
  }
  return cases;
}

struct Verdict {
  std::string name;
  Json record;
  double p_value = 1.0;
  bool statistical = true;
  bool passed = true;
};

}  // namespace

int cmd_verify(const RunConfig& c, VerifySuite suite) {
  Stopwatch clock;
  std::vector<Verdict> verdicts;

  if (suite == VerifySuite::oracle || suite == VerifySuite::all) {
    const auto max_total = c.option<std::int64_t>("verify", "oracle_max_total", 6, 8);
    const OracleCheckReport r = check_exact_against_enumeration(max_total);
    Verdict v;
    v.name = "oracle";
    v.statistical = false;
    v.passed = r.max_abs_difference <= 1e-10;
    v.record["experiment"] = "verify_oracle";
    v.record["parameters"] = {{"max_total", r.max_total}};
    v.record["summary"] = {{"cases", r.cases}, {"max_abs_difference", r.max_abs_difference}};
    verdicts.push_back(std::move(v));
  }

  if (suite == VerifySuite::markov || suite == VerifySuite::all) {
    const MotherDependentLaw law =
        c.law_given ? c.law() : MotherDependentLaw(OffspringLaw::critical_binary(), 2, 0.3);
    const auto replicas = c.option<std::size_t>("verify", "markov_replicas", 40'000, 100'000);
    const auto cases = markov_cases(c, law.types());
    for (std::size_t k = 0; k < cases.size(); ++k) {
      MarkovTestOptions options;
      options.start = cases[k].start;
      options.previous_clones = cases[k].previous;
      options.threads = c.worker_threads();
      options.max_nodes = c.caps.max_nodes;
      Rng seeder = make_stream(c.seed, k);
      const std::uint64_t seed = seeder();
      Verdict v;
      v.name = "markov[" + std::to_string(k) + "]";
      v.record["experiment"] = "verify_markov";
      v.record["parameters"] = {{"seed", c.seed}, {"case", k}, {"v", cases[k].v},
                                {"replicas", replicas}};
      if (cases[k].start) v.record["parameters"]["start"] = *cases[k].start;
      if (cases[k].previous) v.record["parameters"]["previous_clones"] = *cases[k].previous;
      try {
        const MarkovTestReport r = markov_transition_test(law, cases[k].v, replicas, seed, options);
        v.p_value = r.test.p_value;
        v.record["result"] = gof(r.test);
        v.record["summary"] = {{"conditioned", r.conditioned}, {"fresh", r.fresh}};
      } catch (const InsufficientData& e) {
        v.p_value = 0.0;
        v.record["error"] = e.what();
      }
      verdicts.push_back(std::move(v));
    }
  }

  if (suite == VerifySuite::all) {
    const ScalingSetup setup = limit_setup(c);
    const auto replicas = c.option<std::size_t>("verify", "lemma4_replicas", 2000, 10'000);
    const auto rep = run_lemma4_experiment(setup, replicas, c.seed, c.worker_threads(), c.hitting);
    Verdict v;
    v.name = "lemma4";
    v.p_value = rep.ks_clones.p_value;
    std::ostringstream os;
    write_lemma4_report(os, setup, c.seed, rep);
    v.record = Json::parse(os.str());
    v.record["experiment"] = "verify_lemma4";
    verdicts.push_back(std::move(v));
  }

  std::size_t tests = 0;
  for (const auto& v : verdicts) tests += v.statistical ? 1 : 0;
  bool all_passed = true;
  Output out(c);
  for (auto& v : verdicts) {
    if (v.statistical) {
      const double adjusted = bonferroni(v.p_value, tests);
      v.passed = adjusted > 0.01;
      v.record["adjusted_p_value"] = adjusted;
      v.record["simultaneous_tests"] = tests;
    }
    v.record["passed"] = v.passed;
    all_passed = all_passed && v.passed;
    out.report() << v.record.dump() << '\n';
    if (v.statistical)
      std::printf("%-4s %-12s p %.4g  adjusted %.4g\n", v.passed ? "PASS" : "FAIL", v.name.c_str(),
                  v.p_value, bonferroni(v.p_value, tests));
    else
      std::printf("%-4s %-12s max |difference| %.3g over %zu cases\n", v.passed ? "PASS" : "FAIL",
                  v.name.c_str(), v.record["summary"]["max_abs_difference"].get<double>(),
                  v.record["summary"]["cases"].get<std::size_t>());
  }
  write_timing_record(out.timing(), "verify", clock.seconds());
  return all_passed ? kExitOk : kExitStatistical;
}

}  // namespace mdnm::cli
