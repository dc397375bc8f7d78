// SPDX-License-Identifier: Apache-2.0
//
// Seed derivation and random draws. All randomness in the library flows
// through one engine type and one documented seed-mixing function so that
// every run is reproducible from a single root seed.

#pragma once

#include <armadillo>
#include <cstdint>
#include <random>

namespace hybridfb {

using Engine = std::mt19937_64;

// splitmix64 finalizer (Steele, Lea, Flood 2014).
inline std::uint64_t splitmix64(std::uint64_t x) {
    x ^= x >> 30;
    x *= 0xBF58476D1CE4E5B9ULL;
    x ^= x >> 27;
    x *= 0x94D049BB133111EBULL;
    x ^= x >> 31;
    return x;
}

// Child seed `index` of `parent`. Documented contract: children of distinct
// (parent, index) pairs are decorrelated; the same pair always yields the
// same child.
inline std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t index) {
    return splitmix64(parent + 0x9E3779B97F4A7C15ULL * (index + 1));
}

inline Engine make_engine(std::uint64_t seed) { return Engine(seed); }

// n i.i.d. CN(0,1) entries: real and imaginary parts N(0, 1/2),
// drawn interleaved (re, im, re, im, ...).
arma::cx_vec draw_complex_gaussian(Engine& eng, arma::uword n);

double draw_uniform(Engine& eng, double lo, double hi);
double draw_normal(Engine& eng, double mean, double stddev);

} // namespace hybridfb
