// Monte Carlo oracle for the renewal sequence: simulates the cumulative-sum
// process (start at 0, step by i with probability q_i) and estimates p_n as
// the fraction of walks that hit level n.

#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "renewal/distribution.hpp"
#include "renewal/renewal.hpp"

namespace renewal {

struct SimConfig {
    IncrementDistribution dist;
    std::size_t n_max = 100;
    std::uint64_t trials = 1'000'000;
    std::uint64_t seed = 0;
};

struct HitEstimate {
    std::vector<std::uint64_t> hits;  // hits[n] = walks that visited level n, 0 <= n <= n_max
    std::uint64_t trials = 0;
    std::uint64_t seed = 0;
    std::string dist_spec;
    // Bias bound induced by the sampler's tail cutoff (harmonic / custom
    // series); 0 for exact inverse-CDF samplers.
    double sampler_bias_bound = 0.0;

    double estimate(std::size_t n) const { return static_cast<double>(hits[n]) / static_cast<double>(trials); }
    // Normal-approximation standard error sqrt(p(1-p)/trials).
    double sigma(std::size_t n) const;
};

// Deterministic given cfg.seed, independent of thread count and schedule.
// threads = 0 uses RENEWAL_KIT_THREADS / hardware default.
HitEstimate simulate(const SimConfig& cfg, std::size_t threads = 0);

struct LevelComparison {
    std::size_t level = 0;
    double p_hat = 0.0;
    double p_ref = 0.0;
    double sigma = 0.0;
    double abs_diff = 0.0;
    bool pass = false;
};

struct ComparisonReport {
    std::vector<LevelComparison> levels;
    std::size_t failures = 0;
    double pass_fraction = 0.0;
    double z = 0.0;
    // Two-sided normal tail mass per level at this z: the chance budget for
    // false failures (about 6.3e-5 per level at z = 4).
    double expected_false_rate = 0.0;
    bool insufficient_trials = false;  // too few trials for the normal CI to mean anything
};

// Per-level check |p_hat_n - p_n| <= z * sigma_n against recurrence values.
// Throws DistributionMismatch if est and recur describe different laws.
ComparisonReport compare_with_recurrence(const HitEstimate& est, const RenewalSequence<double>& recur, double z = 4.0);

}  // namespace renewal
