#pragma once

// Small deterministic RNG used wherever seeded randomness is part of a
// contract (equivalence certificates, simulations, test-data generation).
// Hand-rolled so streams are identical across standard libraries.

#include <cmath>
#include <cstdint>

namespace steerkit {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

// Stateless mix of (seed, a, b): the counter-based generator behind the
// conversion-rate simulator, reproducible and safe to evaluate in parallel.
inline std::uint64_t counter_hash(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
    std::uint64_t s = seed ^ (a * 0xD1B54A32D192ED03ull) ^ (b * 0xABCC5167CCAD024Full);
    std::uint64_t z = splitmix64(s);
    return splitmix64(s) ^ z;
}

inline double u64_to_unit(std::uint64_t u) {
    return static_cast<double>(u >> 11) * 0x1.0p-53;
}

class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() { return splitmix64(state_); }

    double uniform() { return u64_to_unit(next_u64()); }  // [0, 1)

    // Box-Muller; the spare value is cached so the stream is well defined.
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1 = 0.0;
        do { u1 = uniform(); } while (u1 <= 0.0);
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 6.28318530717958647692 * u2;
        spare_ = r * std::sin(a);
        has_spare_ = true;
        return r * std::cos(a);
    }

private:
    std::uint64_t state_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace steerkit
