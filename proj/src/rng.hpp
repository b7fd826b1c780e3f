// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

namespace siamdiff {

// Deterministic PRNG (xoshiro256++ seeded through splitmix64).
// std::normal_distribution is implementation-defined, so gaussian draws go
// through an explicit Box-Muller transform; identical seeds give bitwise
// identical streams on every platform.
class Rng {
   public:
    explicit Rng(uint64_t seed = 0);

    uint64_t next_u64();

    // Uniform in [0, 1) with 53 random mantissa bits.
    double uniform();
    // Uniform integer in [lo, hi] inclusive.
    int64_t uniform_int(int64_t lo, int64_t hi);
    // Standard normal draw.
    double gaussian();
    // Gaussian(0, sigma^2) wrapped into [0, 2*pi).
    double wrapped_normal(double sigma);

    // Independent child stream keyed by (a, b, c); used to give every
    // (epoch, protein) pair its own reproducible stream.
    Rng derive(uint64_t a, uint64_t b = 0, uint64_t c = 0) const;

   private:
    uint64_t s_[4];
    uint64_t seed_;
};

// Gaussian on the circle: Gaussian(0, sigma^2) draws wrapped into [0, 2*pi).
struct WrappedNormal {
    double sigma;
    explicit WrappedNormal(double sigma_radians);
    double sample(Rng& rng) const { return rng.wrapped_normal(sigma); }
};

// Fill `n` entries with wrapped-normal draws; errors on sigma <= 0.
std::vector<double> sample_wrapped_normal(double sigma, size_t n, Rng& rng);

}  // namespace siamdiff
