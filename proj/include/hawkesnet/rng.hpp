#ifndef HAWKESNET_RNG_HPP
#define HAWKESNET_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace hawkesnet {

using rng_t = std::mt19937_64;

// splitmix64, used both to whiten user seeds and to derive independent
// per-replication streams from a master seed.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline rng_t make_rng(std::uint64_t seed) { return rng_t(splitmix64(seed)); }

// Stream splitting rule: stream k of master seed s is seeded with
// splitmix64(s) xor splitmix64(k+1). Replications are reproducible
// independently of thread scheduling.
inline rng_t split_stream(std::uint64_t master, std::uint64_t index) {
    return rng_t(splitmix64(master) ^ splitmix64(index + 1));
}

// Uniform in (0,1); never returns 0 so -log(u) is always finite.
inline double uniform01(rng_t& rng) {
    const double u = (rng() >> 11) * 0x1.0p-53;
    return u > 0.0 ? u : 0x1.0p-53;
}

inline double uniform_range(rng_t& rng, double a, double b) {
    return a + (b - a) * uniform01(rng);
}

inline double exponential(rng_t& rng, double rate) {
    return -std::log(uniform01(rng)) / rate;
}

// Box-Muller; one value per call keeps replay simple.
inline double normal(rng_t& rng, double mean = 0.0, double sd = 1.0) {
    const double u1 = uniform01(rng);
    const double u2 = uniform01(rng);
    const double r = std::sqrt(-2.0 * std::log(u1));
    return mean + sd * r * std::cos(2.0 * 3.14159265358979323846 * u2);
}

// Knuth multiplication for moderate means, halving for large ones so the
// running product never underflows.
inline long poisson(rng_t& rng, double mean) {
    if (mean <= 0.0) return 0;
    if (mean > 500.0) return poisson(rng, mean / 2.0) + poisson(rng, mean / 2.0);
    const double limit = std::exp(-mean);
    long k = 0;
    double prod = uniform01(rng);
    while (prod > limit) {
        ++k;
        prod *= uniform01(rng);
    }
    return k;
}

inline bool bernoulli(rng_t& rng, double p) { return uniform01(rng) < p; }

// Index draw proportional to the (nonnegative) weights.
inline std::size_t discrete(rng_t& rng, const std::vector<double>& weights) {
    double total = 0.0;
    for (double w : weights) total += w;
    double u = uniform01(rng) * total;
    for (std::size_t i = 0; i + 1 < weights.size(); ++i) {
        u -= weights[i];
        if (u <= 0.0) return i;
    }
    return weights.empty() ? 0 : weights.size() - 1;
}

} // namespace hawkesnet

#endif
