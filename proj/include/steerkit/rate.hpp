#pragma once

// Monte-Carlo check that the asymptotic conversion rate equals the
// single-shot success probability: i.i.d. Bernoulli trials, batched, with a
// counter-based generator so batches are reproducible and parallelizable.

#include <cstdint>

#include "steerkit/types.hpp"

namespace steerkit {

struct RateEstimate {
    double p_succ = 0.0;
    std::uint64_t trials_per_batch = 0;
    std::uint64_t batches = 0;
    double mean = 0.0;      // grand mean of per-batch success fractions
    double variance = 0.0;  // sample variance of per-batch fractions (0 for one batch)
    std::uint64_t seed = 0;
};

RateEstimate simulate_rate(double p_succ, std::uint64_t trials_per_batch,
                           std::uint64_t batches, std::uint64_t seed);

}  // namespace steerkit
