#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <span>

namespace cgas {

inline uint64_t splitmix64(uint64_t& state) {
    uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Deterministic seed derivation tree: derive(seed, salts...) folds each salt
// through splitmix64. Distinct salt tuples give decorrelated streams.
inline uint64_t derive_seed(uint64_t seed) { return splitmix64(seed); }
template <typename... Rest>
uint64_t derive_seed(uint64_t seed, uint64_t salt, Rest... rest) {
    uint64_t s = seed ^ (0x9e3779b97f4a7c15ULL + salt);
    uint64_t mixed = splitmix64(s);
    return derive_seed(mixed, rest...);
}

class Rng {
public:
    explicit Rng(uint64_t seed) : eng_(seed) {}

    uint64_t raw() { return eng_(); }

    // Uniform strictly inside (0, 1); keeps log/log1p transforms finite.
    double uniform() { return (double(eng_() >> 11) + 0.5) * 0x1.0p-53; }

    // Exponential with mean 1; strictly positive.
    double exponential() { return -std::log1p(-uniform()); }

    // Exponential with mean 1 conditioned on being < cap; in [0, cap).
    double trunc_exponential(double cap) {
        return -std::log1p(-uniform() * (1.0 - std::exp(-cap)));
    }

    // Exact Poisson draw by counting unit-rate arrivals; O(mean).
    int64_t poisson(double mean) {
        if (mean <= 0) return 0;
        int64_t n = 0;
        double t = exponential();
        while (t <= mean) {
            ++n;
            t += exponential();
        }
        return n;
    }

    // Index into a cumulative-weight table (strictly increasing, last = total).
    size_t categorical(std::span<const double> cum) {
        double u = uniform() * cum.back();
        size_t lo = 0, hi = cum.size() - 1;
        while (lo < hi) {
            size_t mid = (lo + hi) / 2;
            if (cum[mid] <= u)
                lo = mid + 1;
            else
                hi = mid;
        }
        return lo;
    }

    int64_t uniform_int(int64_t n) {  // in [0, n)
        return int64_t(uniform() * double(n)) % n;
    }

private:
    std::mt19937_64 eng_;
};

}  // namespace cgas
