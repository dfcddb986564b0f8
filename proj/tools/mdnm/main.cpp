#include <cstdio>
#include <functional>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "commands.hpp"

namespace {

using namespace mdnm;
using namespace mdnm::cli;

std::string cap_hint(const CapExceeded& e) {
  switch (e.kind()) {
    case CapExceeded::Kind::nodes: return "raise caps.max_nodes in the config";
    case CapExceeded::Kind::levels: return "raise caps.max_levels in the config";
    case CapExceeded::Kind::steps: return "raise caps.max_steps in the config";
  }
  return "raise the caps in the config";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mother-dependent neutral mutations: simulation, exact laws and scaling limits"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out, forest, profile;
  std::optional<unsigned> threads;
  app.add_option("--config", config_path, "JSON run configuration")->check(CLI::ExistingFile);
  app.add_option("--seed", seed, "Master seed (overrides the config)");
  app.add_option("--out", out, "Output directory (overrides the config)");
  app.add_option("--threads", threads, "Worker threads; 0 uses all cores");
  app.add_option("--profile", profile, "Default sizes")->check(CLI::IsMember({"quick", "full"}));
  app.add_option("--forest", forest, "Hand-encoded forest records instead of simulating")
      ->check(CLI::ExistingFile);

  std::function<int(const RunConfig&)> action;
  auto bind = [&](CLI::App* sub, std::function<int(const RunConfig&)> fn) {
    sub->callback([&action, fn] { action = fn; });
  };

  bind(app.add_subcommand("simulate", "Simulate a forest; write forest, chain and allele tree"),
       cmd_simulate);
  bind(app.add_subcommand("allele-tree", "Build the allele tree of a simulated or given forest"),
       cmd_allele_tree);
  bind(app.add_subcommand("exact", "Exact law of (T0, M1), moments and generating function"),
       cmd_exact);

  auto* limits = app.add_subcommand("limits", "Scaling-limit samplers and experiments");
  limits->require_subcommand(1);
  bind(limits->add_subcommand("lemma4", "Rescaled (T0, M1) against the inverse Gaussian limit"),
       cmd_limits_lemma4);
  bind(limits->add_subcommand("theorem1", "Rescaled allele tree against the CSBP tree"),
       cmd_limits_theorem1);
  bind(limits->add_subcommand("csbp", "Sample the tree-indexed CSBP"), cmd_limits_csbp);
  bind(limits->add_subcommand("ig", "kappa grid and inverse Gaussian samples"), cmd_limits_ig);

  auto* verify = app.add_subcommand("verify", "Verification suites");
  verify->require_subcommand(1);
  bind(verify->add_subcommand("oracle", "Exact law against brute-force enumeration"),
       [](const RunConfig& c) { return cmd_verify(c, VerifySuite::oracle); });
  bind(verify->add_subcommand("markov", "Markov property of the clone-mutant chain"),
       [](const RunConfig& c) { return cmd_verify(c, VerifySuite::markov); });
  bind(verify->add_subcommand("all", "Every suite"),
       [](const RunConfig& c) { return cmd_verify(c, VerifySuite::all); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    RunConfig config = config_path.empty() ? parse_config("{}", ".") : load_config(config_path);
    if (seed) config.seed = *seed;
    if (out) config.out = *out;
    if (threads) config.threads = *threads;
    if (profile) config.profile = parse_profile(*profile);
    if (forest) config.forest = *forest;
    return action(config);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  } catch (const InvalidArgument& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  } catch (const DomainError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  } catch (const MixedRootTypes& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  } catch (const CapExceeded& e) {
    std::fprintf(stderr, "%s; retry with a larger cap: %s\n", e.what(), cap_hint(e).c_str());
    return kExitCap;
  } catch (const CapTooSmall& e) {
    std::fprintf(stderr, "%s; retry with a larger exact.max_total\n", e.what());
    return kExitCap;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
