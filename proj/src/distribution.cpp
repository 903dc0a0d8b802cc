#include "renewal/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "renewal/errors.hpp"

namespace renewal {

struct IncrementDistribution::Impl {
    DistKind kind = DistKind::ExplicitFinite;

    // ExplicitFinite
    std::vector<Rational> weights;    // q_0..q_B
    std::vector<Rational> tails;      // Q_0..Q_B (Q_n = 0 for n >= B)
    std::vector<Rational> tail_sums;  // sum_{i=0}^{n} Q_i for n <= B

    // Geometric
    Rational geo_a{0};

    // CustomSeries
    std::function<double(std::size_t)> custom_weight;
    std::function<double(std::size_t)> custom_tail_bound;

    ExtendedReal mean = ExtendedReal(Rational(1));
    std::optional<std::size_t> support_bound;
    double normalization_adjustment = 0.0;
    std::string spec;
};

namespace {

[[noreturn]] void fail(ValidationError::Violation v, const std::string& msg) { throw ValidationError(v, msg); }

void check_explicit_clauses(const std::vector<Rational>& w) {
    if (w.empty() || w[0] != 0)
        fail(ValidationError::Violation::NonzeroAtZero, "q_0 must be 0");
    for (std::size_t i = 0; i < w.size(); ++i)
        if (w[i] < 0)
            fail(ValidationError::Violation::NegativeWeight,
                 "weights must be nonnegative (q_" + std::to_string(i) + " = " + format_rational(w[i]) + ")");
    Rational total(0);
    for (const auto& q : w) total += q;
    if (total != 1)
        fail(ValidationError::Violation::NotNormalized, "weights must sum to 1 (got " + format_rational(total) + ")");
    std::size_t g = 0;
    for (std::size_t i = 1; i < w.size(); ++i)
        if (w[i] != 0) g = std::gcd(g, i);
    if (g != 1)
        fail(ValidationError::Violation::Periodic,
             "gcd of indices with nonzero weight must be 1 (got " + std::to_string(g) + ")");
}

std::string explicit_spec(const std::vector<Rational>& w) {
    std::ostringstream os;
    os << "{\"explicit\":[";
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (i) os << ",";
        os << "\"" << format_rational(w[i]) << "\"";
    }
    os << "]}";
    return os.str();
}

std::shared_ptr<const IncrementDistribution::Impl> build_explicit(std::vector<Rational> w, double adjustment) {
    check_explicit_clauses(w);
    std::size_t bound = 0;
    for (std::size_t i = 0; i < w.size(); ++i)
        if (w[i] != 0) bound = i;
    w.resize(bound + 1);

    auto impl = std::make_shared<IncrementDistribution::Impl>();
    impl->kind = DistKind::ExplicitFinite;
    impl->support_bound = bound;
    impl->normalization_adjustment = adjustment;

    // Q_n = 1 - sum_{i<=n} q_i, and running sums of Q for tail_sum().
    impl->tails.resize(bound + 1);
    impl->tail_sums.resize(bound + 1);
    Rational cum(0), tsum(0), mean(0);
    for (std::size_t n = 0; n <= bound; ++n) {
        cum += w[n];
        impl->tails[n] = Rational(1) - cum;
        tsum += impl->tails[n];
        impl->tail_sums[n] = tsum;
        if (n > 0) mean += Rational(static_cast<long>(n)) * w[n];
    }
    impl->mean = ExtendedReal(mean);
    impl->spec = explicit_spec(w);
    impl->weights = std::move(w);
    return impl;
}

}  // namespace

IncrementDistribution IncrementDistribution::explicit_rational(std::vector<Rational> weights) {
    return IncrementDistribution(build_explicit(std::move(weights), 0.0));
}

IncrementDistribution IncrementDistribution::explicit_double(const std::vector<double>& weights) {
    std::vector<Rational> w;
    w.reserve(weights.size());
    for (double x : weights) {
        if (!std::isfinite(x))
            fail(ValidationError::Violation::NegativeWeight, "weights must be finite numbers");
        w.push_back(rational_from_double(x));
    }
    if (w.empty() || w[0] != 0) fail(ValidationError::Violation::NonzeroAtZero, "q_0 must be 0");
    Rational total(0);
    for (const auto& q : w) total += q;
    const Rational deviation = total - 1;
    const double dev = std::fabs(to_double(deviation));
    if (dev > 1e-12)
        fail(ValidationError::Violation::NotNormalized,
             "weights must sum to 1 (deviation " + std::to_string(dev) + " exceeds 1e-12)");
    // Restore an exact sum of 1 by adjusting the largest weight.
    if (deviation != 0) {
        std::size_t argmax = 0;
        for (std::size_t i = 1; i < w.size(); ++i)
            if (w[i] > w[argmax]) argmax = i;
        if (argmax == 0)
            fail(ValidationError::Violation::NotNormalized, "weights must sum to 1");
        w[argmax] -= deviation;
    }
    return IncrementDistribution(build_explicit(std::move(w), dev));
}

IncrementDistribution IncrementDistribution::geometric(const Rational& a) {
    if (!(a > 0 && a < 1)) throw std::invalid_argument("geometric family: need 0 < a < 1");
    auto impl = std::make_shared<Impl>();
    impl->kind = DistKind::Geometric;
    impl->geo_a = a;
    impl->mean = ExtendedReal(Rational(1) / (Rational(1) - a));  // sum of tails a^i
    impl->spec = "{\"family\":\"geometric\",\"a\":\"" + format_rational(a) + "\"}";
    return IncrementDistribution(std::move(impl));
}

IncrementDistribution IncrementDistribution::harmonic() {
    auto impl = std::make_shared<Impl>();
    impl->kind = DistKind::Harmonic;
    impl->mean = ExtendedReal::infinite();  // sum of tails 1/(i+1) diverges
    impl->spec = "{\"family\":\"harmonic\"}";
    return IncrementDistribution(std::move(impl));
}

IncrementDistribution IncrementDistribution::custom_series(std::string name,
                                                           std::function<double(std::size_t)> weight,
                                                           std::function<double(std::size_t)> tail_upper_bound,
                                                           ExtendedReal mean,
                                                           std::vector<std::size_t> coprime_support_witness) {
    if (!weight || !tail_upper_bound) throw std::invalid_argument("custom series: accessors required");
    if (weight(0) != 0.0) fail(ValidationError::Violation::NonzeroAtZero, "q_0 must be 0");
    std::size_t g = 0;
    for (std::size_t idx : coprime_support_witness) {
        if (idx == 0 || weight(idx) <= 0.0)
            fail(ValidationError::Violation::Periodic,
                 "aperiodicity witness index " + std::to_string(idx) + " has no positive weight");
        g = std::gcd(g, idx);
    }
    if (g != 1)
        fail(ValidationError::Violation::Periodic, "gcd of witness indices must be 1 (got " + std::to_string(g) + ")");
    for (std::size_t n = 0; n < 64; ++n)
        if (weight(n) < 0.0)
            fail(ValidationError::Violation::NegativeWeight, "weights must be nonnegative (q_" + std::to_string(n) + ")");

    auto impl = std::make_shared<Impl>();
    impl->kind = DistKind::CustomSeries;
    impl->custom_weight = std::move(weight);
    impl->custom_tail_bound = std::move(tail_upper_bound);
    impl->mean = std::move(mean);
    impl->spec = "{\"custom\":\"" + name + "\"}";
    return IncrementDistribution(std::move(impl));
}

DistKind IncrementDistribution::kind() const noexcept { return impl_->kind; }

bool IncrementDistribution::exact() const noexcept { return impl_->kind != DistKind::CustomSeries; }

Rational IncrementDistribution::weight(std::size_t n) const {
    switch (impl_->kind) {
        case DistKind::ExplicitFinite:
            return n < impl_->weights.size() ? impl_->weights[n] : Rational(0);
        case DistKind::Geometric:
            if (n == 0) return Rational(0);
            return (Rational(1) - impl_->geo_a) * rational_pow(impl_->geo_a, n - 1);
        case DistKind::Harmonic: {
            if (n == 0) return Rational(0);
            const mpz_class den = mpz_class(static_cast<unsigned long>(n)) * mpz_class(static_cast<unsigned long>(n) + 1);
            Rational q(mpz_class(1), den);
            q.canonicalize();
            return q;
        }
        case DistKind::CustomSeries:
            throw ExactModeRequired("custom-series distribution has no exact weights");
    }
    throw std::logic_error("unreachable");
}

double IncrementDistribution::weight_d(std::size_t n) const {
    switch (impl_->kind) {
        case DistKind::ExplicitFinite:
            return n < impl_->weights.size() ? to_double(impl_->weights[n]) : 0.0;
        case DistKind::Geometric: {
            if (n == 0) return 0.0;
            const double a = to_double(impl_->geo_a);
            return (1.0 - a) * std::pow(a, static_cast<double>(n - 1));
        }
        case DistKind::Harmonic:
            return n == 0 ? 0.0 : 1.0 / (static_cast<double>(n) * (static_cast<double>(n) + 1.0));
        case DistKind::CustomSeries:
            return impl_->custom_weight(n);
    }
    throw std::logic_error("unreachable");
}

Rational IncrementDistribution::tail(std::size_t n) const {
    switch (impl_->kind) {
        case DistKind::ExplicitFinite:
            return n < impl_->tails.size() ? impl_->tails[n] : Rational(0);
        case DistKind::Geometric:
            return rational_pow(impl_->geo_a, n);
        case DistKind::Harmonic: {
            Rational q(1, static_cast<unsigned long>(n) + 1);
            q.canonicalize();
            return q;
        }
        case DistKind::CustomSeries:
            throw ExactModeRequired("custom-series distribution has no exact tails");
    }
    throw std::logic_error("unreachable");
}

double IncrementDistribution::tail_d(std::size_t n) const {
    if (impl_->kind == DistKind::CustomSeries) {
        double cum = 0.0;
        for (std::size_t i = 1; i <= n; ++i) cum += impl_->custom_weight(i);
        return std::max(0.0, 1.0 - cum);
    }
    return to_double(tail(n));
}

Rational IncrementDistribution::tail_sum(std::size_t upto) const {
    switch (impl_->kind) {
        case DistKind::ExplicitFinite:
            return upto < impl_->tail_sums.size() ? impl_->tail_sums[upto] : impl_->tail_sums.back();
        case DistKind::Geometric:
            // sum_{i=0}^{M} a^i
            return (Rational(1) - rational_pow(impl_->geo_a, upto + 1)) / (Rational(1) - impl_->geo_a);
        case DistKind::Harmonic: {
            // H_{M+1}
            Rational h(0);
            for (std::size_t k = 1; k <= upto + 1; ++k) {
                Rational term(1, static_cast<unsigned long>(k));
                term.canonicalize();
                h += term;
            }
            return h;
        }
        case DistKind::CustomSeries:
            throw ExactModeRequired("custom-series distribution has no exact tail sums");
    }
    throw std::logic_error("unreachable");
}

double IncrementDistribution::tail_sum_d(std::size_t upto) const {
    if (impl_->kind == DistKind::CustomSeries) {
        double cum = 0.0, out = 0.0;
        for (std::size_t n = 0; n <= upto; ++n) {
            if (n >= 1) cum += impl_->custom_weight(n);
            out += std::max(0.0, 1.0 - cum);
        }
        return out;
    }
    return to_double(tail_sum(upto));
}

const ExtendedReal& IncrementDistribution::mean() const noexcept { return impl_->mean; }

std::optional<std::size_t> IncrementDistribution::support_bound() const noexcept { return impl_->support_bound; }

double IncrementDistribution::tail_bound(std::size_t n) const {
    if (impl_->kind == DistKind::CustomSeries) return impl_->custom_tail_bound(n);
    return to_double(tail(n));
}

std::size_t IncrementDistribution::truncation_index(double eps, std::size_t cap) const {
    switch (impl_->kind) {
        case DistKind::ExplicitFinite: {
            for (std::size_t n = 0; n < impl_->tails.size(); ++n)
                if (to_double(impl_->tails[n]) <= eps) return n;
            return impl_->tails.size();
        }
        case DistKind::Geometric: {
            const double a = to_double(impl_->geo_a);
            const double n = std::ceil(std::log(std::max(eps, 1e-300)) / std::log(a));
            return std::min(cap, static_cast<std::size_t>(std::max(0.0, n)));
        }
        case DistKind::Harmonic: {
            // 1/(n+1) <= eps
            const double n = std::ceil(1.0 / std::max(eps, 1e-300) - 1.0);
            return std::min(cap, static_cast<std::size_t>(std::max(0.0, n)));
        }
        case DistKind::CustomSeries: {
            for (std::size_t n = 0;; n = n ? n * 2 : 1) {
                if (n >= cap) return cap;
                if (impl_->custom_tail_bound(n) <= eps) {
                    // binary-search the first index meeting eps in (n/2, n]
                    std::size_t lo = n / 2, hi = n;
                    while (lo + 1 < hi) {
                        const std::size_t mid = lo + (hi - lo) / 2;
                        if (impl_->custom_tail_bound(mid) <= eps)
                            hi = mid;
                        else
                            lo = mid;
                    }
                    return impl_->custom_tail_bound(lo) <= eps ? lo : hi;
                }
            }
        }
    }
    throw std::logic_error("unreachable");
}

double IncrementDistribution::normalization_adjustment() const noexcept { return impl_->normalization_adjustment; }

const std::string& IncrementDistribution::describe() const noexcept { return impl_->spec; }

bool IncrementDistribution::same_law(const IncrementDistribution& other) const noexcept {
    return impl_->spec == other.impl_->spec;
}

IncrementDistribution parse_distribution_spec(const std::string& json_text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::invalid_argument(std::string("distribution spec: invalid JSON: ") + e.what());
    }
    if (!j.is_object()) throw std::invalid_argument("distribution spec: expected a JSON object");

    if (j.contains("explicit")) {
        const auto& arr = j.at("explicit");
        if (!arr.is_array()) throw std::invalid_argument("distribution spec: \"explicit\" must be an array");
        bool any_number = false;
        for (const auto& e : arr) any_number |= e.is_number();
        if (any_number) {
            std::vector<double> w;
            for (const auto& e : arr)
                w.push_back(e.is_number() ? e.get<double>() : to_double(parse_rational(e.get<std::string>())));
            return IncrementDistribution::explicit_double(w);
        }
        std::vector<Rational> w;
        for (const auto& e : arr) w.push_back(parse_rational(e.get<std::string>()));
        return IncrementDistribution::explicit_rational(std::move(w));
    }
    if (j.contains("family")) {
        const std::string fam = j.at("family").get<std::string>();
        if (fam == "geometric") return IncrementDistribution::geometric(parse_rational(j.at("a").get<std::string>()));
        if (fam == "harmonic") return IncrementDistribution::harmonic();
        throw std::invalid_argument("distribution spec: unknown family \"" + fam + "\"");
    }
    throw std::invalid_argument("distribution spec: need \"explicit\" or \"family\"");
}

}  // namespace renewal
