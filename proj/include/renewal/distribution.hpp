// Increment distributions q: validation against the standing hypotheses
// (q_0 = 0, q_n >= 0, total mass 1, aperiodic support), tail sequences Q,
// means, and the named families used as fixtures (geometric, harmonic).

#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "renewal/extended_real.hpp"
#include "renewal/rational.hpp"

namespace renewal {

enum class DistKind { ExplicitFinite, Geometric, Harmonic, CustomSeries };

// A weight specification failed validation. `violation` identifies the
// violated hypothesis clause; the message names it in words.
class ValidationError : public std::runtime_error {
public:
    enum class Violation { NonzeroAtZero, NegativeWeight, NotNormalized, Periodic };

    ValidationError(Violation v, const std::string& what) : std::runtime_error(what), violation_(v) {}
    Violation violation() const noexcept { return violation_; }

private:
    Violation violation_;
};

// Immutable after construction; safe for shared concurrent reads.
// Copies are cheap (shared internals).
class IncrementDistribution {
public:
    // Explicit finite support with exact rational weights (q_0, q_1, ..., q_B).
    static IncrementDistribution explicit_rational(std::vector<Rational> weights);

    // Explicit finite support specified in doubles. If the weights do not sum
    // to 1 exactly, the largest is adjusted so the exact (rational) sum is 1;
    // a pre-normalization deviation above 1e-12 is rejected. The adjustment
    // magnitude is available from normalization_adjustment().
    static IncrementDistribution explicit_double(const std::vector<double>& weights);

    // q_n = (1-a) a^{n-1} for n >= 1; tails Q_n = a^n; mean 1/(1-a). 0 < a < 1.
    static IncrementDistribution geometric(const Rational& a);

    // q_n = 1/(n(n+1)) for n >= 1; tails Q_n = 1/(n+1); infinite mean.
    static IncrementDistribution harmonic();

    // Infinite-support distribution given by an arbitrary weight accessor.
    // No exact representation: exact-mode operations are unavailable.
    // tail_upper_bound(n) must bound Q_n from above and be nonincreasing; it
    // drives every downstream truncation budget. coprime_support_witness is a
    // set of indices with q > 0 whose gcd is 1 (aperiodicity certificate).
    static IncrementDistribution custom_series(std::string name,
                                               std::function<double(std::size_t)> weight,
                                               std::function<double(std::size_t)> tail_upper_bound,
                                               ExtendedReal mean,
                                               std::vector<std::size_t> coprime_support_witness);

    DistKind kind() const noexcept;

    // True when exact rational weights and tails are available (every kind
    // except custom series).
    bool exact() const noexcept;

    Rational weight(std::size_t n) const;  // q_n, exact; throws ExactModeRequired for custom series
    double weight_d(std::size_t n) const;  // q_n as double

    Rational tail(std::size_t n) const;  // Q_n = sum_{i>n} q_i, exact
    double tail_d(std::size_t n) const;

    Rational tail_sum(std::size_t upto) const;  // sum_{i=0}^{upto} Q_i, exact (closed form per family)
    double tail_sum_d(std::size_t upto) const;

    const ExtendedReal& mean() const noexcept;  // mu = sum n q_n = sum Q_i

    // Largest index with q > 0, or nullopt for infinite support.
    std::optional<std::size_t> support_bound() const noexcept;

    // Upper bound on Q_n usable for truncation budgets (exact tail when
    // available, the declared bound for custom series).
    double tail_bound(std::size_t n) const;

    // Smallest N with tail_bound(N) <= eps, capped; used as default series
    // truncation budget.
    std::size_t truncation_index(double eps, std::size_t cap = (std::size_t{1} << 20)) const;

    // |largest-weight adjustment| applied by explicit_double; 0 otherwise.
    double normalization_adjustment() const noexcept;

    // Canonical spec string, e.g. {"explicit":["0","1/2","1/2"]} or
    // {"family":"geometric","a":"1/2"}. Identical strings <=> same law.
    const std::string& describe() const noexcept;

    bool same_law(const IncrementDistribution& other) const noexcept;

    struct Impl;  // defined in distribution.cpp

private:
    explicit IncrementDistribution(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
    std::shared_ptr<const Impl> impl_;
};

// Parses the distribution spec format consumed by the CLI:
//   {"explicit": ["0", "1/2", "1/2"]}   rationals as "num/den" strings
//                                       (JSON numbers are accepted and go
//                                       through the double-normalization path)
//   {"family": "geometric", "a": "1/2"}
//   {"family": "harmonic"}
IncrementDistribution parse_distribution_spec(const std::string& json_text);

}  // namespace renewal
