#pragma once

#include <cmath>
#include <cstdint>

namespace ubiq {

// Stateless counter-based generator: every draw is a pure function of
// (seed, key words), so results are independent of traversal order and
// of any parallel schedule.
class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

    std::uint64_t bits(std::uint64_t k0, std::uint64_t k1 = 0, std::uint64_t k2 = 0) const {
        std::uint64_t h = seed_ ^ 0x9e3779b97f4a7c15ULL;
        h = mix(h ^ mix(k0));
        h = mix(h ^ mix(k1 + 0xbf58476d1ce4e5b9ULL));
        h = mix(h ^ mix(k2 + 0x94d049bb133111ebULL));
        return mix(h);
    }

    // Uniform in [0,1) with 53 random bits.
    double uniform(std::uint64_t k0, std::uint64_t k1 = 0, std::uint64_t k2 = 0) const {
        return static_cast<double>(bits(k0, k1, k2) >> 11) * 0x1.0p-53;
    }

    double gaussian(double mean, double stddev,
                    std::uint64_t k0, std::uint64_t k1 = 0, std::uint64_t k2 = 0) const {
        // Box-Muller on two decorrelated streams of the same key.
        double u1 = uniform(k0, k1, k2 ^ 0x5555555555555555ULL);
        double u2 = uniform(k0, k1, k2 ^ 0xaaaaaaaaaaaaaaaaULL);
        if (u1 <= 0.0) u1 = 0x1.0p-53;
        const double r = std::sqrt(-2.0 * std::log(u1));
        return mean + stddev * r * std::cos(6.283185307179586476925286766559 * u2);
    }

    // Exact Poisson draw via Knuth's product method, split into chunks so the
    // running product never underflows.
    std::uint64_t poisson(double mean, std::uint64_t k0, std::uint64_t k1 = 0) const {
        std::uint64_t total = 0;
        std::uint64_t chunk = 0;
        while (mean > 0.0) {
            const double lambda = mean > 32.0 ? 32.0 : mean;
            mean -= lambda;
            const double limit = std::exp(-lambda);
            double prod = 1.0;
            std::uint64_t count = 0;
            std::uint64_t draw = 0;
            do {
                prod *= uniform(k0, k1, (chunk << 32) | draw);
                ++draw;
                ++count;
            } while (prod > limit);
            total += count - 1;
            ++chunk;
        }
        return total;
    }

    std::uint64_t seed() const { return seed_; }

private:
    static std::uint64_t mix(std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    std::uint64_t seed_;
};

}  // namespace ubiq
