#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace zensim {

using Rng = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Independent stream for (seed, stream index); same pair always gives the same engine.
inline Rng stream_rng(std::uint64_t seed, std::uint64_t index, std::uint64_t salt = 0)
{
    const std::uint64_t s = splitmix64(splitmix64(seed ^ splitmix64(salt)) + index);
    std::seed_seq seq{static_cast<std::uint32_t>(s), static_cast<std::uint32_t>(s >> 32),
                      static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(salt)};
    return Rng(seq);
}

// Uniform double in [0,1) from 53 random bits; avoids implementation-defined distributions.
inline double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

inline int uniform_int(Rng& rng, int n) { return static_cast<int>(uniform01(rng) * n); }

// Standard normal via Box-Muller (one draw per call).
inline double normal01(Rng& rng)
{
    double u = uniform01(rng);
    while (u <= 0.0) u = uniform01(rng);
    const double v = uniform01(rng);
    return std::sqrt(-2.0 * std::log(u)) * std::cos(6.283185307179586 * v);
}

// Gamma(shape, 1), Marsaglia-Tsang; shape < 1 through the u^(1/shape) boost.
inline double gamma_sample(Rng& rng, double shape)
{
    if (shape < 1.0) {
        double u = uniform01(rng);
        while (u <= 0.0) u = uniform01(rng);
        return gamma_sample(rng, shape + 1.0) * std::pow(u, 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x, v;
        do {
            x = normal01(rng);
            v = 1.0 + c * x;
        } while (v <= 0.0);
        v = v * v * v;
        const double u = uniform01(rng);
        if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
        if (u > 0.0 && std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
    }
}

// Poisson(mean) by inversion.
inline int poisson_sample(Rng& rng, double mean)
{
    if (mean <= 0) return 0;
    if (mean > 30) {
        // Split into halves to keep exp(-mean) representable.
        return poisson_sample(rng, mean / 2) + poisson_sample(rng, mean / 2);
    }
    const double L = std::exp(-mean);
    int k = 0;
    double p = 1.0;
    do {
        ++k;
        p *= uniform01(rng);
    } while (p > L);
    return k - 1;
}

} // namespace zensim
