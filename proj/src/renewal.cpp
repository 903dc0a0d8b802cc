#include "renewal/renewal.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "renewal/errors.hpp"

namespace renewal {

namespace {

// sum_{i=lo}^{hi} q[i] * p[n-i], accumulated in blocks; block sums are
// combined with Neumaier compensation so the result error stays near
// block_size * eps instead of n * eps.
double conv_term(const double* q, const double* p, std::size_t n, std::size_t lo, std::size_t hi) {
    constexpr std::size_t kBlock = 512;
    double sum = 0.0, comp = 0.0;
    for (std::size_t b = lo; b <= hi; b += kBlock) {
        const std::size_t e = std::min(hi, b + kBlock - 1);
        double blk = 0.0;
        for (std::size_t i = b; i <= e; ++i) blk += q[i] * p[n - i];
        const double t = sum + blk;
        comp += (std::fabs(sum) >= std::fabs(blk)) ? (sum - t) + blk : (blk - t) + sum;
        sum = t;
    }
    return sum + comp;
}

}  // namespace

RenewalSequence<Rational> compute_renewal_exact(const IncrementDistribution& d, std::size_t upto) {
    if (!d.exact())
        throw ExactModeRequired("compute_renewal_exact: distribution has no exact weights");
    const std::size_t qmax = d.support_bound() ? std::min(*d.support_bound(), upto) : upto;
    std::vector<Rational> q(qmax + 1);
    for (std::size_t i = 0; i <= qmax; ++i) q[i] = d.weight(i);

    std::vector<Rational> p(upto + 1);
    p[0] = 1;
    for (std::size_t n = 1; n <= upto; ++n) {
        Rational acc(0);
        const std::size_t hi = std::min(n, qmax);
        for (std::size_t i = 1; i <= hi; ++i) acc += q[i] * p[n - i];
        p[n] = std::move(acc);
    }
    return {d, Sequence<Rational>(std::move(p))};
}

RenewalSequence<double> compute_renewal(const IncrementDistribution& d, std::size_t upto) {
    const std::size_t qmax = d.support_bound() ? std::min(*d.support_bound(), upto) : upto;
    std::vector<double> q(qmax + 1, 0.0);
    for (std::size_t i = 1; i <= qmax; ++i) q[i] = d.weight_d(i);

    std::vector<double> p(upto + 1, 0.0);
    p[0] = 1.0;
    for (std::size_t n = 1; n <= upto; ++n)
        p[n] = conv_term(q.data(), p.data(), n, 1, std::min(n, qmax));
    return {d, Sequence<double>(std::move(p))};
}

IdentityReport check_identities(const RenewalSequence<Rational>& r) {
    const IncrementDistribution& d = r.dist;
    if (!d.exact())
        throw ExactModeRequired("check_identities: distribution has no exact weights/tails");

    const std::size_t n = r.terms.last_index();
    IdentityReport report;
    report.upto = n;

    std::vector<Rational> qv(n + 1), tv(n + 1);
    for (std::size_t i = 0; i <= n; ++i) {
        qv[i] = d.weight(i);
        tv[i] = d.tail(i);
    }
    const Sequence<Rational> q(std::move(qv));
    const Sequence<Rational> tails(std::move(tv));
    const Sequence<Rational>& p = r.terms;
    const Sequence<Rational> eye = identity_seq<Rational>(n);

    auto record = [&](std::string name, bool pass, std::string detail) {
        report.checks.push_back({std::move(name), pass, std::move(detail)});
    };

    {
        bool ok = true;
        std::size_t bad = 0;
        for (std::size_t i = 0; i <= n && ok; ++i)
            if (p[i] < 0 || p[i] > 1) { ok = false; bad = i; }
        record("0 <= p_n <= 1", ok, ok ? "" : "violated at n=" + std::to_string(bad));
    }
    {
        const Sequence<Rational> pq = convolve(p, q, n);
        bool ok = true;
        std::size_t bad = 0;
        for (std::size_t i = 0; i <= n && ok; ++i)
            if (p[i] != eye[i] + pq[i]) { ok = false; bad = i; }
        record("p = I + p*q", ok, ok ? "" : "differs at n=" + std::to_string(bad));
    }
    {
        std::vector<Rational> imq(n + 1);
        for (std::size_t i = 0; i <= n; ++i) imq[i] = eye[i] - q[i];
        const Sequence<Rational> one_minus_q(std::move(imq));
        const Sequence<Rational> conv = convolve(p, one_minus_q, n);
        bool ok = conv == eye;
        record("p*(I-q) = I", ok, ok ? "" : "differs from I");
        const Sequence<Rational> tails_from_conv = convolve(one_minus_q, ones_seq<Rational>(n), n);
        bool ok2 = tails_from_conv == tails;
        record("(I-q)*1 = Q", ok2, ok2 ? "" : "differs from Q");
    }
    {
        const Sequence<Rational> pQ = convolve(p, tails, n);
        bool ok = true;
        std::size_t bad = 0;
        for (std::size_t i = 0; i <= n && ok; ++i)
            if (pQ[i] != 1) { ok = false; bad = i; }
        record("p*Q = 1", ok, ok ? "" : "differs at n=" + std::to_string(bad));
    }

    report.all_pass = std::all_of(report.checks.begin(), report.checks.end(),
                                  [](const IdentityCheck& c) { return c.pass; });
    return report;
}

namespace {

LimitBracket<Rational> bracket_from_tail_sum(const IncrementDistribution& d, std::size_t cutoff, const Rational& s) {
    LimitBracket<Rational> b;
    b.cutoff = cutoff;
    b.hi = Rational(1) / s;  // s >= Q_0 = 1 > 0
    b.hi_valid = true;
    if (!d.mean().is_infinite()) {
        const Rational beyond = d.mean().value() - s;  // sum_{i>M} Q_i
        b.lo = (Rational(1) - beyond) / s;
        b.lo_valid = true;
    }
    return b;
}

}  // namespace

LimitBracket<Rational> limit_bracket_exact(const IncrementDistribution& d, std::size_t cutoff) {
    return bracket_from_tail_sum(d, cutoff, d.tail_sum(cutoff));
}

LimitBracket<double> limit_bracket(const IncrementDistribution& d, std::size_t cutoff) {
    LimitBracket<double> b;
    b.cutoff = cutoff;
    if (d.exact()) {
        const LimitBracket<Rational> e = limit_bracket_exact(d, cutoff);
        b.hi = to_double(e.hi);
        b.hi_valid = e.hi_valid;
        b.lo = e.lo_valid ? to_double(e.lo) : 0.0;
        b.lo_valid = e.lo_valid;
        return b;
    }
    const double s = d.tail_sum_d(cutoff);
    b.hi = 1.0 / s;
    b.hi_valid = true;
    if (!d.mean().is_infinite()) {
        b.lo = (1.0 - (d.mean().to_double() - s)) / s;
        b.lo_valid = true;
    }
    return b;
}

std::vector<LimitBracket<Rational>> bracket_trace_exact(const IncrementDistribution& d, std::size_t cutoff_max) {
    if (!d.exact())
        throw ExactModeRequired("bracket_trace_exact: distribution has no exact tails");
    std::vector<LimitBracket<Rational>> out;
    out.reserve(cutoff_max + 1);
    Rational s(0);
    for (std::size_t m = 0; m <= cutoff_max; ++m) {
        s += d.tail(m);
        out.push_back(bracket_from_tail_sum(d, m, s));
    }
    return out;
}

namespace {

template <class T>
T window_sup_abs(const std::vector<T>& v, std::size_t n_first, std::size_t n_last) {
    T best(0);
    for (std::size_t i = n_first; i <= n_last; ++i) {
        T a = v[i] < 0 ? T(-v[i]) : v[i];
        if (a > best) best = a;
    }
    return best;
}

}  // namespace

double decay_report(const RenewalSequence<double>& r, unsigned order, std::size_t n_first, std::size_t n_last) {
    if (n_last > r.terms.last_index() || n_first > n_last)
        throw std::out_of_range("decay_report: window outside computed prefix");
    const Sequence<double> dk = delta(r.terms, order);
    return window_sup_abs(dk.terms(), n_first, n_last);
}

Rational decay_report_exact(const RenewalSequence<Rational>& r, unsigned order, std::size_t n_first, std::size_t n_last) {
    if (n_last > r.terms.last_index() || n_first > n_last)
        throw std::out_of_range("decay_report: window outside computed prefix");
    const Sequence<Rational> dk = delta(r.terms, order);
    return window_sup_abs(dk.terms(), n_first, n_last);
}

LimitEstimate estimate_limit(const IncrementDistribution& d, double tol, std::size_t budget,
                             const std::function<void(const LimitEstimate&)>& on_step) {
    if (!(tol > 0)) throw std::invalid_argument("estimate_limit: tol must be positive");

    LimitEstimate best;
    for (std::size_t cutoff = 0;; cutoff = cutoff ? cutoff * 2 : 1) {
        const std::size_t window_end = std::max<std::size_t>(16, 10 * cutoff);
        if (window_end > budget) {
            best.converged = false;
            return best;  // budget exhausted: best partial result, flagged
        }

        LimitBracket<double> br = limit_bracket(d, cutoff);
        const RenewalSequence<double> p = compute_renewal(d, window_end);
        const std::size_t window_start = window_end / 2;
        double mn = p.terms[window_start], mx = mn;
        for (std::size_t i = window_start; i <= window_end; ++i) {
            mn = std::min(mn, p.terms[i]);
            mx = std::max(mx, p.terms[i]);
        }
        const double osc = mx - mn;

        br.window_start = window_start;
        const double lo_eff = br.lo_valid ? br.lo : 0.0;  // p >= 0 always
        best.bracket = br;
        best.n_used = window_end;
        best.window_osc = osc;
        best.estimate = 0.5 * (lo_eff + br.hi);
        if (on_step) on_step(best);

        const bool width_ok = br.lo_valid ? (br.hi - br.lo <= tol) : (br.hi <= tol);
        if (width_ok && osc <= tol) {
            best.converged = true;
            return best;
        }
    }
}

}  // namespace renewal
