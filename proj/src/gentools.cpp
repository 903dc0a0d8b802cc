#include "renewal/gentools.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "renewal/errors.hpp"

namespace renewal {

namespace {

constexpr double kEps = 2.220446049250313e-16;
constexpr double kPi = 3.141592653589793238462643383279502884;

using Complex = std::complex<double>;

std::size_t series_budget(const IncrementDistribution& d, std::optional<std::size_t> requested) {
    if (requested) return *requested;
    return d.truncation_index(1e-10);
}

}  // namespace

PolarPoint::PolarPoint(double r_, double theta_) : r(r_), theta(theta_) {
    if (!(r > 0.0 && r <= 1.0))
        throw std::domain_error("polar point: r must lie in (0, 1]");
    if (!(theta >= -kPi - 1e-15 && theta <= kPi + 1e-15))
        throw std::domain_error("polar point: theta must lie in [-pi, pi]");
}

Complex PolarPoint::to_complex() const noexcept { return std::polar(r, theta); }

ComplexValue weight_gf(const IncrementDistribution& d, PolarPoint zp, std::optional<std::size_t> budget) {
    const Complex z = zp.to_complex();
    switch (d.kind()) {
        case DistKind::ExplicitFinite: {
            const std::size_t b = *d.support_bound();
            Complex acc(0.0, 0.0);
            for (std::size_t n = b + 1; n-- > 1;) acc = (acc + d.weight_d(n)) * z;
            return {acc, kEps * static_cast<double>(b + 2) * 4.0};
        }
        case DistKind::Geometric: {
            const double a = 1.0 - d.weight_d(1);  // q_1 = 1 - a
            const Complex v = d.weight_d(1) * z / (1.0 - a * z);
            return {v, 8.0 * kEps};
        }
        case DistKind::Harmonic: {
            if (std::abs(z) <= 0.5) {
                // sum z^n / (n(n+1)); remainder below 2^-64
                Complex acc(0.0, 0.0), pw = z;
                for (std::size_t n = 1; n <= 64; ++n) {
                    acc += pw / (static_cast<double>(n) * (static_cast<double>(n) + 1.0));
                    pw *= z;
                }
                return {acc, std::pow(0.5, 64) + 64.0 * kEps};
            }
            if (z == Complex(1.0, 0.0)) return {Complex(1.0, 0.0), 4.0 * kEps};  // (1-z) log(1-z) -> 0
            // 1 + ((1-z)/z) log(1-z); 1-z has positive real part off the
            // singular point, so the principal branch is the right one.
            const Complex v = 1.0 + ((1.0 - z) / z) * std::log(1.0 - z);
            return {v, 1e-14 * (1.0 + std::abs(v))};
        }
        case DistKind::CustomSeries: {
            const std::size_t n_trunc = series_budget(d, budget);
            Complex acc(0.0, 0.0), pw(1.0, 0.0);
            for (std::size_t n = 1; n <= n_trunc; ++n) {
                pw *= z;
                acc += d.weight_d(n) * pw;
            }
            return {acc, d.tail_bound(n_trunc) + kEps * static_cast<double>(n_trunc + 2) * 4.0};
        }
    }
    throw std::logic_error("unreachable");
}

ComplexValue tail_gf(const IncrementDistribution& d, PolarPoint zp, std::optional<std::size_t> budget) {
    if (d.mean().is_infinite())
        throw InfiniteMeanError("tail_gf: tail generating function needs a finite mean");
    const Complex z = zp.to_complex();
    switch (d.kind()) {
        case DistKind::ExplicitFinite: {
            const std::size_t b = *d.support_bound();  // Q_n = 0 for n >= b
            Complex acc(0.0, 0.0);
            for (std::size_t n = b; n-- > 0;) acc = acc * z + d.tail_d(n);
            return {acc, kEps * static_cast<double>(b + 2) * 4.0};
        }
        case DistKind::Geometric: {
            const double a = 1.0 - d.weight_d(1);  // tails a^n
            const Complex v = 1.0 / (1.0 - a * z);
            return {v, 8.0 * kEps * std::abs(v)};
        }
        case DistKind::Harmonic:
            throw std::logic_error("unreachable");  // infinite mean, handled above
        case DistKind::CustomSeries: {
            const std::size_t n_trunc = series_budget(d, budget);
            Complex acc(0.0, 0.0), pw(1.0, 0.0);
            double cum = 0.0, sum_tails = 0.0;
            for (std::size_t n = 0; n <= n_trunc; ++n) {
                if (n >= 1) {
                    cum += d.weight_d(n);
                    pw *= z;
                }
                const double tail_n = std::max(0.0, 1.0 - cum);
                acc += tail_n * pw;
                sum_tails += tail_n;
            }
            // remainder estimate mu - sum_{i<=N} Q_i (mean declared by the caller)
            const double rem = std::max(0.0, d.mean().to_double() - sum_tails);
            return {acc, rem + kEps * static_cast<double>(n_trunc + 2) * 4.0};
        }
    }
    throw std::logic_error("unreachable");
}

ComplexValue renewal_gf(const RenewalSequence<double>& p, PolarPoint zp) {
    if (zp.r >= 1.0)
        throw std::domain_error("renewal_gf: truncated power series of p needs r < 1");
    const Complex z = zp.to_complex();
    const auto& terms = p.terms.terms();
    Complex acc(0.0, 0.0);
    for (std::size_t n = terms.size(); n-- > 0;) acc = acc * z + terms[n];
    const double n1 = static_cast<double>(terms.size());
    const double trunc = std::pow(zp.r, n1) / (1.0 - zp.r);  // |p_n| <= 1
    return {acc, trunc + kEps * n1 * 4.0};
}

double one_minus_cos_over_xsq(double x) {
    const double ax = std::fabs(x);
    if (ax < 1e-4) {
        const double x2 = x * x;
        return 0.5 - x2 / 24.0 + x2 * x2 / 720.0;
    }
    return (1.0 - std::cos(x)) / (x * x);
}

ComplexValue delta2_kernel(const IncrementDistribution& d, PolarPoint zp, std::optional<std::size_t> budget) {
    if (zp.is_singular()) return {Complex(0.0, 0.0), 0.0};
    const Complex z = zp.to_complex();
    if (d.kind() == DistKind::Harmonic) {
        // (1-z)^2 / (1-f_q) collapses to z (1-z) / log(1/(1-z)), stable
        // arbitrarily close to the singular point.
        const Complex v = z * (1.0 - z) / (-std::log(1.0 - z));
        return {v, 1e-14 * (1.0 + std::abs(v))};
    }
    const ComplexValue fq = weight_gf(d, zp, budget);
    const Complex denom = 1.0 - fq.value;
    const Complex num = (1.0 - z) * (1.0 - z);
    const Complex v = num / denom;
    const double ad = std::abs(denom);
    double err;
    if (ad > 2.0 * fq.err)
        err = std::abs(num) * fq.err / (ad * (ad - fq.err)) + 8.0 * kEps * (1.0 + std::abs(v));
    else
        err = std::numeric_limits<double>::infinity();  // denominator not separated from the error budget
    return {v, err};
}

std::vector<PolarPoint> default_grid() {
    constexpr std::size_t kThetas = 512;
    const double radii[] = {0.5, 0.9, 0.99, 1.0};
    std::vector<PolarPoint> grid;
    grid.reserve(4 * kThetas);
    const double h = 2.0 * kPi / static_cast<double>(kThetas);
    for (double r : radii)
        for (std::size_t j = 0; j < kThetas; ++j) {
            const double theta = -kPi + h * static_cast<double>(j);
            if (r == 1.0 && theta == 0.0) continue;
            grid.emplace_back(r, theta);
        }
    return grid;
}

GridCheckReport check_strict_cos_bound(const IncrementDistribution& d, std::span<const PolarPoint> grid) {
    GridCheckReport rep;
    rep.min_margin = std::numeric_limits<double>::infinity();
    for (const PolarPoint& pt : grid) {
        if (pt.is_singular())
            throw std::invalid_argument("check_strict_cos_bound: grid must exclude (1,0)");
        const ComplexValue fq = weight_gf(d, pt);
        const double margin = 1.0 - fq.value.real() - fq.err;
        rep.min_margin = std::min(rep.min_margin, margin);
        if (!(margin > 0.0)) ++rep.violations;
        ++rep.points;
    }
    rep.pass = rep.violations == 0;
    return rep;
}

GridCheckReport check_kernel_modulus_bound(const IncrementDistribution& d, std::span<const PolarPoint> grid) {
    GridCheckReport rep;
    rep.min_margin = std::numeric_limits<double>::infinity();
    rep.max_excess = -std::numeric_limits<double>::infinity();
    for (const PolarPoint& pt : grid) {
        if (pt.is_singular())
            throw std::invalid_argument("check_kernel_modulus_bound: grid must exclude (1,0)");
        const ComplexValue kernel = delta2_kernel(d, pt);
        const ComplexValue fq = weight_gf(d, pt);
        const double cos_sum = fq.value.real();
        const double trig = 1.0 + pt.r * pt.r - 2.0 * pt.r * std::cos(pt.theta);
        const double denom = 1.0 - cos_sum;
        const double rhs = trig / denom;
        const double lhs = std::abs(kernel.value);
        // slack: kernel evaluation error, rhs denominator error, rounding;
        // an uncertifiable kernel evaluation counts as a violation
        const double tol = kernel.err + rhs * (fq.err / std::max(denom - fq.err, 1e-300)) + 1e-12 * (1.0 + rhs);
        const double excess = lhs - rhs;
        rep.max_excess = std::max(rep.max_excess, excess);
        if (!std::isfinite(kernel.err) || excess > tol) ++rep.violations;
        if (pt.theta == 0.0 && pt.r < 1.0)
            rep.real_axis_max_gap = std::max(rep.real_axis_max_gap, std::fabs(lhs - rhs));
        ++rep.points;
    }
    rep.pass = rep.violations == 0;
    return rep;
}

DecompositionReport check_real_part_decomposition(const IncrementDistribution& d, PolarPoint zp,
                                                  std::optional<std::size_t> budget) {
    DecompositionReport rep;
    const double r = zp.r, theta = zp.theta;

    rep.trig_lhs = 1.0 + r * r - 2.0 * r * std::cos(theta);
    const double s_half = std::sin(theta / 2.0);
    rep.trig_rhs = (1.0 - r) * (1.0 - r) + 4.0 * r * s_half * s_half;
    rep.trig_abs_diff = std::fabs(rep.trig_lhs - rep.trig_rhs);

    const ComplexValue fq = weight_gf(d, zp, budget);
    rep.series_lhs = 1.0 - fq.value.real();

    double t1 = 0.0, t2 = 0.0, trunc_err = 0.0;
    if (d.kind() == DistKind::ExplicitFinite) {
        const std::size_t b = *d.support_bound();
        for (std::size_t n = 1; n <= b; ++n) {
            const double qn = d.weight_d(n);
            const double rn = std::pow(r, static_cast<double>(n));
            t1 += qn * (1.0 - rn);
            t2 += static_cast<double>(n) * static_cast<double>(n) * qn * rn * one_minus_cos_over_xsq(static_cast<double>(n) * theta);
        }
        t2 *= theta * theta;
    } else {
        // sum q_n (1 - r^n) = 1 - f_q(r), exactly 0 at r = 1
        if (r < 1.0) {
            const ComplexValue fq_r = weight_gf(d, PolarPoint(r, 0.0), budget);
            t1 = 1.0 - fq_r.value.real();
            trunc_err += fq_r.err;
        }
        if (theta != 0.0) {
            const std::size_t n_trunc = series_budget(d, budget);
            double acc = 0.0, rn = 1.0;
            for (std::size_t n = 1; n <= n_trunc; ++n) {
                rn *= r;
                const double nn = static_cast<double>(n);
                acc += nn * nn * d.weight_d(n) * rn * one_minus_cos_over_xsq(nn * theta);
            }
            t2 = theta * theta * acc;
            // n^2 G(n theta) <= 2/theta^2, so the dropped tail is <= 2 Q_N
            trunc_err += 2.0 * d.tail_bound(n_trunc);
        }
    }
    rep.series_rhs = t1 + t2;
    rep.series_abs_diff = std::fabs(rep.series_lhs - rep.series_rhs);
    rep.series_budget = fq.err + trunc_err + 1e-12 * (1.0 + std::fabs(rep.series_lhs));

    const double trig_tol = 4.0 * kEps * (1.0 + rep.trig_lhs);
    rep.pass = rep.trig_abs_diff <= trig_tol && rep.series_abs_diff <= rep.series_budget;
    return rep;
}

ShrinkSearchResult kernel_vanishing_delta(const IncrementDistribution& d, double eps, double delta_start,
                                          int max_halvings) {
    ShrinkSearchResult res;
    double delta = delta_start;
    for (int k = 0; k < max_halvings; ++k, delta *= 0.5) {
        double worst = 0.0;
        for (int ri = 0; ri <= 8; ++ri) {
            const double r = 1.0 - delta * static_cast<double>(ri) / 8.0;
            if (!(r > 0.0)) continue;
            for (int ti = -16; ti <= 16; ++ti) {
                const double theta = delta * static_cast<double>(ti) / 16.0;
                if (std::fabs(theta) > kPi) continue;
                if ((1.0 - r) + std::fabs(theta) > delta) continue;
                if (r == 1.0 && theta == 0.0) continue;
                worst = std::max(worst, std::abs(delta2_kernel(d, PolarPoint(r, theta)).value));
            }
        }
        if (worst <= eps) {
            res.delta = delta;
            res.max_abs = worst;
            res.found = true;
            return res;
        }
    }
    return res;
}

}  // namespace renewal
