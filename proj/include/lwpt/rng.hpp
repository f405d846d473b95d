#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace lwpt {

// Deterministic RNG stream. All distribution transforms are hand-rolled so
// that a (seed, call sequence) pair yields bit-identical draws on every
// platform and standard library.
class Rng {
public:
    explicit Rng(uint64_t seed) : gen_(seed) {}

    uint64_t next_u64() { return gen_(); }

    // Uniform in [0, 1) with 53 bits of mantissa.
    double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    // Box-Muller, cosine branch only (no cached spare, keeps the stream
    // position a pure function of the call count).
    double normal(double mean = 0.0, double stddev = 1.0) {
        double u1 = uniform01();
        double u2 = uniform01();
        while (u1 <= 0.0) u1 = uniform01();
        double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
        return mean + stddev * z;
    }

    bool bernoulli(double p) { return uniform01() < p; }

    double exponential(double rate = 1.0) {
        double u = uniform01();
        while (u <= 0.0) u = uniform01();
        return -std::log(u) / rate;
    }

    // Uniform integer in [0, n).
    uint64_t below(uint64_t n) { return gen_() % n; }

private:
    std::mt19937_64 gen_;
};

}  // namespace lwpt
