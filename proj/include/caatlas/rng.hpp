#pragma once

#include <cstdint>

namespace caatlas {

// splitmix64 finalizer; bijective on 64-bit words.
constexpr uint64_t mix64(uint64_t z) {
    z += 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

// Deterministic random stream (splitmix64). One stream per trial.
class RandomStream {
public:
    explicit RandomStream(uint64_t seed) : state_(seed) {}

    uint64_t next() {
        state_ += 0x9E3779B97F4A7C15ull;
        uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1).
    double next_double() { return double(next() >> 11) * 0x1.0p-53; }

    // Uniform in [0, n); n > 0. 128-bit multiply, no modulo bias worth
    // caring about at n << 2^64.
    uint64_t next_below(uint64_t n) {
        return uint64_t((__uint128_t(next()) * n) >> 64);
    }

private:
    uint64_t state_;
};

// Per-(rule, trial) stream seed. (rule_id, trial) packs injectively into
// one word, so distinct pairs always get distinct seeds for a fixed
// global seed.
struct SeedRecipe {
    uint64_t global_seed = 0;

    uint64_t stream_seed(uint32_t rule_id, uint64_t trial) const {
        return mix64(global_seed ^ mix64((uint64_t(rule_id) << 40) | trial));
    }
};

}  // namespace caatlas
