#include "steerkit/rate.hpp"

#include <vector>

#include "steerkit/rng.hpp"

namespace steerkit {

RateEstimate simulate_rate(double p_succ, std::uint64_t trials_per_batch,
                           std::uint64_t batches, std::uint64_t seed) {
    if (p_succ < 0.0 || p_succ > 1.0)
        throw InvalidDistributionError("simulate_rate: p_succ outside [0,1]");
    if (trials_per_batch == 0 || batches == 0)
        throw InvalidDistributionError("simulate_rate: need at least one trial and batch");

    std::vector<double> fractions(batches);
    for (std::uint64_t b = 0; b < batches; ++b) {
        std::uint64_t hits = 0;
        for (std::uint64_t t = 0; t < trials_per_batch; ++t) {
            if (u64_to_unit(counter_hash(seed, b, t)) < p_succ) ++hits;
        }
        fractions[b] = static_cast<double>(hits) / static_cast<double>(trials_per_batch);
    }
    double mean = 0.0;
    for (double f : fractions) mean += f;
    mean /= static_cast<double>(batches);
    double var = 0.0;
    if (batches > 1) {
        for (double f : fractions) var += (f - mean) * (f - mean);
        var /= static_cast<double>(batches - 1);
    }
    RateEstimate est;
    est.p_succ = p_succ;
    est.trials_per_batch = trials_per_batch;
    est.batches = batches;
    est.mean = mean;
    est.variance = var;
    est.seed = seed;
    return est;
}

}  // namespace steerkit
