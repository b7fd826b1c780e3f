// SPDX-License-Identifier: Apache-2.0
#include "rng.hpp"

#include <cmath>

#include "error.hpp"

namespace siamdiff {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

uint64_t splitmix64(uint64_t& x) {
    x += 0x9e3779b97f4a7c15ULL;
    uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

}  // namespace

Rng::Rng(uint64_t seed) : seed_(seed) {
    uint64_t x = seed;
    for (auto& s : s_) s = splitmix64(x);
}

uint64_t Rng::next_u64() {
    const uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
}

double Rng::uniform() { return double(next_u64() >> 11) * 0x1.0p-53; }

int64_t Rng::uniform_int(int64_t lo, int64_t hi) {
    if (hi < lo) throw InvalidParameterError("uniform_int: empty range");
    const uint64_t span = uint64_t(hi - lo) + 1;
    // Rejection sampling keeps the distribution exactly uniform.
    const uint64_t limit = UINT64_MAX - UINT64_MAX % span;
    uint64_t x;
    do {
        x = next_u64();
    } while (x >= limit);
    return lo + int64_t(x % span);
}

double Rng::gaussian() {
    // Box-Muller; the sine branch is discarded so the stream layout stays
    // one-draw-per-call.
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
}

double Rng::wrapped_normal(double sigma) {
    if (!(sigma > 0.0)) throw InvalidParameterError("wrapped_normal: sigma must be > 0");
    double a = std::fmod(sigma * gaussian(), kTwoPi);
    if (a < 0.0) a += kTwoPi;
    // fmod can round up to exactly 2*pi for tiny negative inputs.
    if (a >= kTwoPi) a = 0.0;
    return a;
}

Rng Rng::derive(uint64_t a, uint64_t b, uint64_t c) const {
    uint64_t x = seed_;
    uint64_t h = splitmix64(x);
    x ^= a * 0x9e3779b97f4a7c15ULL;
    h ^= splitmix64(x);
    x ^= b * 0xc2b2ae3d27d4eb4fULL;
    h ^= splitmix64(x);
    x ^= c * 0x165667b19e3779f9ULL;
    h ^= splitmix64(x);
    return Rng(h);
}

WrappedNormal::WrappedNormal(double sigma_radians) : sigma(sigma_radians) {
    if (!(sigma > 0.0)) throw InvalidParameterError("WrappedNormal: sigma must be > 0");
}

std::vector<double> sample_wrapped_normal(double sigma, size_t n, Rng& rng) {
    const WrappedNormal dist(sigma);
    std::vector<double> out(n);
    for (auto& v : out) v = dist.sample(rng);
    return out;
}

}  // namespace siamdiff
