// Random streams and the few scalar draws the samplers need.
#pragma once

#include <cstdint>
#include <random>

namespace mdnm {

using Rng = std::mt19937_64;

std::uint64_t splitmix64(std::uint64_t x);

// Independent stream number `index` derived from a master seed. The same
// (seed, index) pair always yields the same stream.
Rng make_stream(std::uint64_t master_seed, std::uint64_t index);

// Uniform on the open interval (0, 1).
double uniform_open(Rng& rng);

std::int64_t draw_binomial(Rng& rng, std::int64_t trials, double p);
std::int64_t draw_poisson(Rng& rng, double mean);
double draw_standard_normal(Rng& rng);

}  // namespace mdnm
