#include "renewal/fourier.hpp"

#include <quadmath.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>
#include <vector>

#include "renewal/errors.hpp"
#include "renewal/gentools.hpp"
#include "renewal/renewal.hpp"
#include "renewal/sequence.hpp"
#include "renewal/threads.hpp"

namespace renewal {

namespace {

using quad = __float128;
using cquad = __complex128;

cquad make_cquad(quad re, quad im) { return re + im * 1.0iq; }

quad rat_to_quad(const Rational& x) {
    // split numerator and denominator into double hi/lo parts (~106 bits each)
    auto mpz_to_quad = [](const mpz_class& n) {
        const double hi = n.get_d();
        const mpz_class rem = n - mpz_class(hi);
        return static_cast<quad>(hi) + static_cast<quad>(rem.get_d());
    };
    return mpz_to_quad(x.get_num()) / mpz_to_quad(x.get_den());
}

// f_q(z) in binary128: exact coefficients for finite supports, closed forms
// for the families, truncated series for custom distributions.
struct QuadWeightGf {
    DistKind kind;
    std::vector<quad> coeffs;  // explicit: q_0..q_B
    quad geo_a = 0;

    explicit QuadWeightGf(const IncrementDistribution& d) : kind(d.kind()) {
        switch (kind) {
            case DistKind::ExplicitFinite: {
                const std::size_t b = *d.support_bound();
                coeffs.resize(b + 1);
                for (std::size_t n = 0; n <= b; ++n) coeffs[n] = rat_to_quad(d.weight(n));
                break;
            }
            case DistKind::Geometric:
                geo_a = rat_to_quad(Rational(1) - d.weight(1));
                break;
            case DistKind::Harmonic:
                break;
            case DistKind::CustomSeries: {
                const std::size_t n_trunc = d.truncation_index(1e-12, std::size_t{1} << 16);
                coeffs.resize(n_trunc + 1);
                for (std::size_t n = 0; n <= n_trunc; ++n) coeffs[n] = d.weight_d(n);
                break;
            }
        }
    }

    cquad operator()(cquad z) const {
        switch (kind) {
            case DistKind::ExplicitFinite:
            case DistKind::CustomSeries: {
                cquad acc = 0;
                for (std::size_t n = coeffs.size(); n-- > 1;) acc = (acc + coeffs[n]) * z;
                return acc;
            }
            case DistKind::Geometric:
                return (1 - geo_a) * z / (1 - geo_a * z);
            case DistKind::Harmonic: {
                if (cabsq(z) <= 0.5q) {
                    cquad acc = 0, pw = z;
                    for (std::size_t n = 1; n <= 128; ++n) {
                        acc += pw / (static_cast<quad>(n) * (static_cast<quad>(n) + 1));
                        pw *= z;
                    }
                    return acc;
                }
                return 1 + ((1 - z) / z) * clogq(1 - z);
            }
        }
        return 0;
    }
};

constexpr quad kPiQ = 3.141592653589793238462643383279502884197Q;

std::size_t normalize_panels(std::size_t panels) {
    if (panels < 2) panels = 2;
    if (panels % 2) ++panels;
    return panels;
}

}  // namespace

std::vector<QuadratureResult> delta_coefficient_table(const IncrementDistribution& d,
                                                      std::span<const unsigned> diff_orders, std::size_t m_max,
                                                      double r, std::size_t panels) {
    if (!(r > 0.0 && r < 1.0))
        throw std::domain_error("delta_coefficient_table: need 0 < r < 1 (use the boundary integrals at r = 1)");
    panels = normalize_panels(panels);

    const QuadWeightGf fq(d);
    const quad rq = r;

    // per node: z_j, e^{-it_j}, and the shared base 1/(1 - f_q(z_j))
    std::vector<cquad> z(panels), u(panels), base(panels);
    {
        const quad h = 2 * kPiQ / static_cast<quad>(panels);
        auto eval = [&](std::size_t j) {
            const quad t = -kPiQ + h * static_cast<quad>(j);
            const cquad eit = make_cquad(cosq(t), sinq(t));
            z[j] = rq * eit;
            u[j] = make_cquad(cosq(t), -sinq(t));
            base[j] = 1 / (1 - fq(z[j]));
        };
        const std::size_t workers = std::min<std::size_t>(worker_threads(), panels >= 1024 ? 8 : 1);
        if (workers > 1) {
            std::vector<std::thread> pool;
            const std::size_t chunk = (panels + workers - 1) / workers;
            for (std::size_t w = 0; w < workers; ++w) {
                const std::size_t lo = w * chunk, hi = std::min(panels, lo + chunk);
                pool.emplace_back([&, lo, hi] {
                    for (std::size_t j = lo; j < hi; ++j) eval(j);
                });
            }
            for (auto& t : pool) t.join();
        } else {
            for (std::size_t j = 0; j < panels; ++j) eval(j);
        }
    }

    std::vector<QuadratureResult> out;
    out.reserve(diff_orders.size() * (m_max + 1));
    std::vector<cquad> w(panels), e(panels);
    const quad full_scale = 2 * kPiQ / static_cast<quad>(panels);
    const quad half_scale = 2 * kPiQ / static_cast<quad>(panels / 2);
    for (unsigned l : diff_orders) {
        for (std::size_t j = 0; j < panels; ++j) {
            cquad k = base[j];
            for (unsigned i = 0; i < l; ++i) k *= (1 - z[j]);
            w[j] = k;
            e[j] = 1;
        }
        for (std::size_t m = 0; m <= m_max; ++m) {
            cquad full = 0, half = 0;
            for (std::size_t j = 0; j < panels; ++j) {
                const cquad term = w[j] * e[j];
                full += term;
                if (j % 2 == 0) half += term;
                e[j] *= u[j];  // advance e^{-imt_j} for the next m
            }
            full *= full_scale;
            half *= half_scale;

            QuadratureResult res;
            res.value = {static_cast<double>(crealq(full)), static_cast<double>(cimagq(full))};
            res.panels = panels;
            res.est_error = static_cast<double>(cabsq(full - half));
            res.integrand = IntegrandKind::DiskKernel;
            res.diff_order = l;
            res.coeff_index = m;
            res.radius = r;
            out.push_back(res);
        }
    }
    return out;
}

QuadratureResult delta_coefficient_integral(const IncrementDistribution& d, unsigned diff_order, std::size_t m,
                                            double r, std::size_t panels) {
    const unsigned orders[] = {diff_order};
    return delta_coefficient_table(d, orders, m, r, panels).back();
}

namespace {

QuadratureResult boundary_integral(const IncrementDistribution& d, std::size_t m, std::size_t panels,
                                   IntegrandKind kind) {
    panels = normalize_panels(panels);
    const double h = 2.0 * M_PI / static_cast<double>(panels);

    std::vector<std::complex<double>> nodes(panels);
    for (std::size_t j = 0; j < panels; ++j) {
        const double t = -M_PI + h * static_cast<double>(j);
        std::complex<double> kernel;
        if (kind == IntegrandKind::FiniteMeanBoundary) {
            kernel = 1.0 / tail_gf(d, PolarPoint(1.0, t)).value;
        } else {
            // the kernel itself supplies the removable value 0 at t = 0
            kernel = delta2_kernel(d, PolarPoint(1.0, t)).value;
        }
        nodes[j] = kernel * std::polar(1.0, -static_cast<double>(m) * t);
    }

    // Neumaier-compensated sums, full and half panel counts
    auto reduce = [&](std::size_t stride) {
        double sr = 0, cr = 0, si = 0, ci = 0;
        auto add = [](double& s, double& c, double v) {
            const double t = s + v;
            c += (std::fabs(s) >= std::fabs(v)) ? (s - t) + v : (v - t) + s;
            s = t;
        };
        std::size_t count = 0;
        for (std::size_t j = 0; j < panels; j += stride, ++count) {
            add(sr, cr, nodes[j].real());
            add(si, ci, nodes[j].imag());
        }
        return std::complex<double>(sr + cr, si + ci) * (2.0 * M_PI / static_cast<double>(count));
    };
    const std::complex<double> full = reduce(1);
    const std::complex<double> half = reduce(2);

    QuadratureResult res;
    res.value = full;
    res.panels = panels;
    res.est_error = std::abs(full - half);
    res.integrand = kind;
    res.diff_order = kind == IntegrandKind::FiniteMeanBoundary ? 1 : 2;
    res.coeff_index = m;
    res.radius = 1.0;
    return res;
}

}  // namespace

QuadratureResult boundary_delta1_integral(const IncrementDistribution& d, std::size_t m, std::size_t panels) {
    if (d.mean().is_infinite())
        throw InfiniteMeanError("boundary_delta1_integral: needs a finite mean (1/f_Q on the circle)");
    return boundary_integral(d, m, panels, IntegrandKind::FiniteMeanBoundary);
}

QuadratureResult boundary_delta2_integral(const IncrementDistribution& d, std::size_t m, std::size_t panels) {
    if (!d.mean().is_infinite())
        throw FiniteMeanError("boundary_delta2_integral: meant for infinite-mean distributions; "
                              "use boundary_delta1_integral");
    return boundary_integral(d, m, panels, IntegrandKind::InfiniteMeanBoundary);
}

std::vector<DecayRow> riemann_lebesgue_probe(const IncrementDistribution& d, unsigned diff_order,
                                             std::span<const std::size_t> m_values) {
    if (m_values.empty()) return {};
    const std::size_t m_max = *std::max_element(m_values.begin(), m_values.end());
    const RenewalSequence<double> p = compute_renewal(d, m_max);
    const Sequence<double> dk = delta(p.terms, diff_order);
    std::vector<DecayRow> rows;
    rows.reserve(m_values.size());
    for (std::size_t m : m_values) rows.push_back({m, std::fabs(dk[m])});
    return rows;
}

}  // namespace renewal
