#include "renewal/mc.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "renewal/errors.hpp"
#include "renewal/rng.hpp"
#include "renewal/threads.hpp"

namespace renewal {

namespace {

// Inverse-CDF increment sampler. Exact table inversion for finite support,
// closed forms for the families, sequential search for custom series.
class IncrementSampler {
public:
    explicit IncrementSampler(const IncrementDistribution& d) : dist_(d), kind_(d.kind()) {
        switch (kind_) {
            case DistKind::ExplicitFinite: {
                const std::size_t b = *d.support_bound();
                cdf_.resize(b + 1);
                double cum = 0.0;
                for (std::size_t i = 0; i <= b; ++i) {
                    cum += d.weight_d(i);
                    cdf_[i] = cum;
                }
                break;
            }
            case DistKind::Geometric:
                log_a_ = std::log(1.0 - d.weight_d(1));
                break;
            case DistKind::Harmonic:
                // cutoff where Q_n drops below 2^-53; unreachable by any
                // representable u, so the induced bias is at most Q_cutoff
                cutoff_ = std::uint64_t{1} << 53;
                bias_bound_ = 1.0 / (static_cast<double>(cutoff_) + 1.0);
                break;
            case DistKind::CustomSeries: {
                cutoff_ = d.truncation_index(0x1.0p-53, std::size_t{1} << 24);
                bias_bound_ = d.tail_bound(cutoff_);
                break;
            }
        }
    }

    std::uint64_t draw(SplitMix64& g) const {
        const double u = g.next_unit();  // [0, 1)
        switch (kind_) {
            case DistKind::ExplicitFinite: {
                // smallest i with u < cdf[i]
                for (std::size_t i = 1; i < cdf_.size(); ++i)
                    if (u < cdf_[i]) return i;
                return cdf_.size() - 1;
            }
            case DistKind::Geometric: {
                // smallest n >= 1 with 1 - a^n > u
                const double n = std::floor(std::log1p(-u) / log_a_);
                return 1 + static_cast<std::uint64_t>(std::max(0.0, n));
            }
            case DistKind::Harmonic: {
                // CDF(n) = n/(n+1); smallest n with n > u/(1-u)
                const double x = u / (1.0 - u);
                const std::uint64_t n = 1 + static_cast<std::uint64_t>(std::min(x, 9.2e18));
                return std::min(n, cutoff_);
            }
            case DistKind::CustomSeries: {
                double cum = 0.0;
                for (std::size_t i = 1; i <= cutoff_; ++i) {
                    cum += dist_.weight_d(i);
                    if (u < cum) return i;
                }
                return cutoff_;
            }
        }
        return 1;
    }

    double bias_bound() const { return bias_bound_; }

private:
    IncrementDistribution dist_;
    DistKind kind_;
    std::vector<double> cdf_;
    double log_a_ = 0.0;
    std::uint64_t cutoff_ = 0;
    double bias_bound_ = 0.0;
};

}  // namespace

double HitEstimate::sigma(std::size_t n) const {
    const double p = estimate(n);
    return std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
}

HitEstimate simulate(const SimConfig& cfg, std::size_t threads) {
    if (cfg.trials < 1) throw std::invalid_argument("simulate: need at least one trial");
    const IncrementSampler sampler(cfg.dist);
    const std::size_t n_max = cfg.n_max;

    if (threads == 0) threads = worker_threads();
    threads = std::max<std::size_t>(1, std::min<std::size_t>(threads, cfg.trials));

    std::vector<std::vector<std::uint64_t>> partial(threads, std::vector<std::uint64_t>(n_max + 1, 0));
    auto run_range = [&](std::size_t worker, std::uint64_t t0, std::uint64_t t1) {
        auto& hits = partial[worker];
        for (std::uint64_t t = t0; t < t1; ++t) {
            SplitMix64 g = stream_for(cfg.seed, t);
            std::uint64_t x = 0;  // every walk starts at level 0
            while (x <= n_max) {
                x += sampler.draw(g);
                if (x <= n_max) ++hits[x];
            }
        }
    };

    if (threads > 1) {
        std::vector<std::thread> pool;
        const std::uint64_t chunk = (cfg.trials + threads - 1) / threads;
        for (std::size_t w = 0; w < threads; ++w) {
            const std::uint64_t t0 = w * chunk, t1 = std::min<std::uint64_t>(cfg.trials, t0 + chunk);
            if (t0 >= t1) break;
            pool.emplace_back(run_range, w, t0, t1);
        }
        for (auto& th : pool) th.join();
    } else {
        run_range(0, 0, cfg.trials);
    }

    HitEstimate est;
    est.hits.assign(n_max + 1, 0);
    est.hits[0] = cfg.trials;  // level 0 is hit by definition
    for (const auto& part : partial)
        for (std::size_t n = 1; n <= n_max; ++n) est.hits[n] += part[n];
    est.trials = cfg.trials;
    est.seed = cfg.seed;
    est.dist_spec = cfg.dist.describe();
    est.sampler_bias_bound = sampler.bias_bound();
    return est;
}

ComparisonReport compare_with_recurrence(const HitEstimate& est, const RenewalSequence<double>& recur, double z) {
    if (est.dist_spec != recur.dist.describe())
        throw DistributionMismatch("compare_with_recurrence: estimate and recurrence use different distributions");
    const std::size_t n_top = std::min(est.hits.size() - 1, recur.terms.last_index());

    ComparisonReport rep;
    rep.z = z;
    rep.expected_false_rate = std::erfc(z / std::sqrt(2.0));
    rep.insufficient_trials = est.trials < 100;
    rep.levels.reserve(n_top + 1);
    for (std::size_t n = 0; n <= n_top; ++n) {
        LevelComparison lc;
        lc.level = n;
        lc.p_hat = est.estimate(n);
        lc.p_ref = recur.terms[n];
        lc.sigma = est.sigma(n);
        lc.abs_diff = std::fabs(lc.p_hat - lc.p_ref);
        lc.pass = lc.abs_diff <= z * lc.sigma;
        if (!lc.pass) ++rep.failures;
        rep.levels.push_back(lc);
    }
    rep.pass_fraction = 1.0 - static_cast<double>(rep.failures) / static_cast<double>(rep.levels.size());
    return rep;
}

}  // namespace renewal
