// Subcommands of the mdnm tool. Each returns the process exit code.
#pragma once

#include "config.hpp"

namespace mdnm::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitCap = 3;
inline constexpr int kExitStatistical = 4;

int cmd_simulate(const RunConfig& config);
int cmd_allele_tree(const RunConfig& config);
int cmd_exact(const RunConfig& config);

int cmd_limits_lemma4(const RunConfig& config);
int cmd_limits_theorem1(const RunConfig& config);
int cmd_limits_csbp(const RunConfig& config);
int cmd_limits_ig(const RunConfig& config);

enum class VerifySuite { oracle, markov, all };
int cmd_verify(const RunConfig& config, VerifySuite suite);

}  // namespace mdnm::cli
