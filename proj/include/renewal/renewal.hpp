// The renewal sequence p (p_0 = 1, p_n = sum q_i p_{n-i}), its exact
// identity suite, and the computable limit machinery: two-sided brackets
// for lim p_n, difference-decay diagnostics, and a bracket+oscillation
// stopping rule that estimates the limit 1/mu.

#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "renewal/distribution.hpp"
#include "renewal/rational.hpp"
#include "renewal/sequence.hpp"

namespace renewal {

template <class T>
struct RenewalSequence {
    IncrementDistribution dist;
    Sequence<T> terms;  // p_0..p_N
};

// Exact recurrence; requires exact weights. p_0 = 1, p_n = sum_{i=1}^n q_i p_{n-i}.
RenewalSequence<Rational> compute_renewal_exact(const IncrementDistribution& d, std::size_t upto);

// Float recurrence. The convolution sum uses block-compensated summation;
// the accumulated error of p_n is bounded by recurrence_error_bound(n).
RenewalSequence<double> compute_renewal(const IncrementDistribution& d, std::size_t upto);

// Per-term float error bound for compute_renewal: n * machine epsilon
// (p is a convex combination of earlier terms, all in [0,1]).
inline double recurrence_error_bound(std::size_t n) { return static_cast<double>(n) * 2.220446049250313e-16; }

struct IdentityCheck {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct IdentityReport {
    std::size_t upto = 0;
    std::vector<IdentityCheck> checks;
    bool all_pass = false;
};

// Verifies, bit-exactly on the prefix of r:
//   p = I + p*q,  p*(I-q) = I,  (I-q)*1 = Q,  p*Q = 1,  0 <= p_n <= 1.
IdentityReport check_identities(const RenewalSequence<Rational>& r);

// Two-sided bound on lim p_n from a finite cutoff M:
//   hi = 1 / sum_{i=0}^{M} Q_i                      (always valid)
//   lo = (1 - sum_{i>M} Q_i) / sum_{i=0}^{M} Q_i    (valid iff mu < infinity)
// lo <= 1/mu <= hi whenever lo is valid.
template <class T>
struct LimitBracket {
    std::size_t cutoff = 0;        // M
    std::size_t window_start = 0;  // set by estimate_limit: start of the oscillation window
    T lo{};
    T hi{};
    bool lo_valid = false;
    bool hi_valid = false;
};

LimitBracket<Rational> limit_bracket_exact(const IncrementDistribution& d, std::size_t cutoff);
LimitBracket<double> limit_bracket(const IncrementDistribution& d, std::size_t cutoff);

// Brackets for every M in [0, cutoff_max], computed incrementally.
std::vector<LimitBracket<Rational>> bracket_trace_exact(const IncrementDistribution& d, std::size_t cutoff_max);

// sup |Delta^k[p]_n| over the window n in [n_first, n_last].
double decay_report(const RenewalSequence<double>& r, unsigned order, std::size_t n_first, std::size_t n_last);
Rational decay_report_exact(const RenewalSequence<Rational>& r, unsigned order, std::size_t n_first, std::size_t n_last);

struct LimitEstimate {
    double estimate = 0.0;
    LimitBracket<double> bracket;
    std::size_t n_used = 0;    // last index of the oscillation window
    double window_osc = 0.0;   // max - min of p over [n_used/2, n_used]
    bool converged = false;    // false = budget exhausted (best partial result returned)
};

// Grows the cutoff M (with window length N = 10*M) until the bracket width
// (or hi alone when mu is infinite) and the windowed oscillation of p both
// drop below tol. Returns the bracket midpoint (midpoint of [0, hi] in the
// infinite-mean case). On budget exhaustion returns the best bracket with
// converged = false. on_step, when set, sees every (M, bracket, osc) visited.
LimitEstimate estimate_limit(const IncrementDistribution& d, double tol, std::size_t budget = (std::size_t{1} << 20),
                             const std::function<void(const LimitEstimate&)>& on_step = {});

}  // namespace renewal
