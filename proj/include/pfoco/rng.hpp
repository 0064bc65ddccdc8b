#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace pfoco {

using Rng = std::mt19937_64;

// Builds an independent stream from a key such as (seed, T, algorithm id).
// std::seed_seq is fully specified by the standard, so streams are
// reproducible across standard libraries.
Rng make_stream(std::initializer_list<std::uint64_t> key);

// Draws a 64-bit seed for a child stream.
inline std::uint64_t child_seed(Rng& rng) { return rng(); }

double uniform(Rng& rng, double lo, double hi);
double standard_normal(Rng& rng);

}  // namespace pfoco
