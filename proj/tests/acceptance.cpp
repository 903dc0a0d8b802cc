// Acceptance suite: one pass/fail line per criterion, every tolerance pinned
// in code. Exit status = number of failed criteria.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "renewal/distribution.hpp"
#include "renewal/fourier.hpp"
#include "renewal/gentools.hpp"
#include "renewal/mc.hpp"
#include "renewal/renewal.hpp"
#include "renewal/sequence.hpp"

using namespace renewal;

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr double kTwoPi = 2.0 * kPi;

Rational rat(long n, long d) { return make_rational(n, d); }

IncrementDistribution half_half() {
    return IncrementDistribution::explicit_rational({rat(0, 1), rat(1, 2), rat(1, 2)});
}

// Random dyadic distribution: 2..5 support points drawn from [1,12] with
// gcd 1, weights k/64.
IncrementDistribution random_support_dist(std::mt19937_64& gen) {
    while (true) {
        const int points = 2 + static_cast<int>(gen() % 4);
        std::vector<std::size_t> support;
        for (int i = 0; i < points; ++i) {
            const std::size_t idx = 1 + gen() % 12;
            if (std::find(support.begin(), support.end(), idx) == support.end()) support.push_back(idx);
        }
        std::size_t g = 0;
        for (std::size_t s : support) g = std::gcd(g, s);
        if (support.size() < 2 || g != 1) continue;

        std::vector<long> parts(support.size(), 1);
        long rest = 64 - static_cast<long>(support.size());
        for (std::size_t i = 0; i + 1 < support.size(); ++i) {
            const long take = static_cast<long>(gen() % static_cast<unsigned long>(rest + 1));
            parts[i] += take;
            rest -= take;
        }
        parts.back() += rest;

        std::vector<Rational> w(13, Rational(0));
        for (std::size_t i = 0; i < support.size(); ++i) w[support[i]] += Rational(parts[i]) / 64;
        return IncrementDistribution::explicit_rational(w);
    }
}

bool criterion1(std::string& detail) {
    std::mt19937_64 gen(0xC0FFEE);
    for (int trial = 0; trial < 100; ++trial) {
        const auto d = random_support_dist(gen);
        const auto rep = check_identities(compute_renewal_exact(d, 200));
        if (!rep.all_pass) {
            detail = "identity failure on trial " + std::to_string(trial) + " dist " + d.describe();
            return false;
        }
    }
    detail = "100 distributions, prefix 200, all identities bit-exact";
    return true;
}

bool criterion2(std::string& detail) {
    const auto d = half_half();
    const auto p = compute_renewal_exact(d, 60);
    for (std::size_t n = 0; n <= 60; ++n) {
        Rational dev = p.terms[n] - rat(2, 3);
        if (dev < 0) dev = -dev;
        if (dev != rational_pow(rat(1, 2), n) / 3) {
            detail = "|p_n - 2/3| != (1/3) 2^-n at n=" + std::to_string(n);
            return false;
        }
    }
    const auto est = estimate_limit(d, 1e-9);
    if (!est.converged || std::fabs(est.estimate - 2.0 / 3.0) > 1e-9) {
        detail = "estimate_limit missed 2/3 at tol 1e-9";
        return false;
    }
    const auto geo = compute_renewal_exact(IncrementDistribution::geometric(rat(1, 2)), 1000);
    for (std::size_t n = 1; n <= 1000; ++n)
        if (geo.terms[n] != rat(1, 2)) {
            detail = "geometric(1/2) p_n != 1/2 at n=" + std::to_string(n);
            return false;
        }
    detail = "closed form exact to n=60; estimate within 1e-9; geometric p_n = 1/2 to n=1000";
    return true;
}

bool criterion3(std::string& detail) {
    const auto d = IncrementDistribution::harmonic();

    // hi(M) = 1/H_{M+1}, H accumulated independently here
    Rational h(0);
    std::size_t next_check = 0;
    for (std::size_t m = 0; m <= 616; ++m) {
        h += Rational(1, static_cast<unsigned long>(m) + 1);
        if (m == next_check || m == 616) {
            const auto br = limit_bracket_exact(d, m);
            if (br.lo_valid || br.hi != Rational(1) / h) {
                detail = "hi(M) != 1/H_{M+1} at M=" + std::to_string(m);
                return false;
            }
            next_check = next_check ? next_check * 2 : 1;
        }
    }
    const auto b616 = limit_bracket_exact(d, 616);
    if (!(b616.hi <= rat(3, 20))) {
        detail = "hi(616) > 0.15";
        return false;
    }

    const std::size_t n_top = 100'000;
    const auto p = compute_renewal(d, n_top);
    double mx = 0.0;
    for (std::size_t n = n_top / 2; n <= n_top; ++n) mx = std::max(mx, p.terms[n]);
    const double cap = to_double(b616.hi) + 0.02;
    if (!(mx < cap)) {
        detail = "max p on [N/2,N] = " + std::to_string(mx) + " not below hi(616)+0.02 = " + std::to_string(cap);
        return false;
    }
    char buf[160];
    std::snprintf(buf, sizeof buf, "hi(616)=%.6f, max p on [5e4,1e5]=%.6f < %.6f", to_double(b616.hi), mx, cap);
    detail = buf;
    return true;
}

bool criterion4(std::string& detail) {
    std::mt19937_64 gen(0xBEEF);
    std::vector<IncrementDistribution> dists;
    for (int i = 0; i < 18; ++i) dists.push_back(random_support_dist(gen));
    dists.push_back(IncrementDistribution::geometric(rat(1, 2)));
    dists.push_back(IncrementDistribution::geometric(rat(3, 4)));

    for (const auto& d : dists) {
        const Rational target = d.mean().reciprocal_or_zero();
        const auto trace = bracket_trace_exact(d, 1000);
        for (std::size_t m = 0; m <= 1000; ++m) {
            const auto& br = trace[m];
            if (!br.lo_valid || br.lo > target || target > br.hi) {
                detail = "bracket fails to sandwich 1/mu at M=" + std::to_string(m) + " for " + d.describe();
                return false;
            }
            if (m > 0 && (br.hi > trace[m - 1].hi || br.lo < trace[m - 1].lo)) {
                detail = "bracket not monotone at M=" + std::to_string(m) + " for " + d.describe();
                return false;
            }
        }
    }
    detail = "20 finite-mean distributions, M=0..1000, monotone and sandwiching exactly";
    return true;
}

bool criterion5(std::string& detail) {
    std::mt19937_64 gen(0xABCD);
    const unsigned orders[] = {0u, 1u, 2u};
    double worst = 0.0;
    for (int trial = 0; trial < 10; ++trial) {
        const auto d = random_support_dist(gen);
        const auto p = compute_renewal_exact(d, 52);
        const Sequence<Rational> deltas[] = {delta(p.terms, 0), delta(p.terms, 1), delta(p.terms, 2)};
        for (double r : {0.5, 0.9}) {
            const auto table = delta_coefficient_table(d, orders, 50, r, 4096);
            for (const auto& q : table) {
                const double scale = kTwoPi * std::pow(r, static_cast<double>(q.coeff_index));
                const double gap =
                    std::fabs(q.value.real() / scale - to_double(deltas[q.diff_order][q.coeff_index]));
                worst = std::max(worst, gap);
                if (gap > 1e-8) {
                    char buf[160];
                    std::snprintf(buf, sizeof buf, "gap %.3e at l=%u m=%zu r=%.1f dist %s", gap, q.diff_order,
                                  q.coeff_index, r, d.describe().c_str());
                    detail = buf;
                    return false;
                }
            }
        }
    }
    char buf[96];
    std::snprintf(buf, sizeof buf, "3060 integrals at 4096 panels, worst normalized gap %.3e", worst);
    detail = buf;
    return true;
}

bool criterion6(std::string& detail) {
    const auto d = IncrementDistribution::geometric(rat(1, 2));
    double worst = 0.0;
    for (std::size_t m = 0; m <= 10; ++m) {
        const double expected = m == 0 ? 1.0 : (m == 1 ? -0.5 : 0.0);
        const auto q = boundary_delta1_integral(d, m, 4096);
        const double gap = std::fabs(q.value.real() / kTwoPi - expected);
        worst = std::max(worst, gap);
        if (gap > 1e-6) {
            detail = "boundary coefficient off by " + std::to_string(gap) + " at m=" + std::to_string(m);
            return false;
        }
    }
    char buf[96];
    std::snprintf(buf, sizeof buf, "1/f_Q = 1 - z/2 recovered, worst gap %.3e", worst);
    detail = buf;
    return true;
}

bool criterion7(std::string& detail) {
    const auto d = IncrementDistribution::harmonic();
    const auto p = compute_renewal(d, 32);
    const auto d2 = delta(p.terms, 2);
    double worst = 0.0;
    for (std::size_t m = 0; m <= 30; ++m) {
        const auto q = boundary_delta2_integral(d, m, 4096);
        const double got = q.value.real() / kTwoPi;
        const double tol = std::max(1e-4, 10.0 * q.est_error / kTwoPi);
        const double gap = std::fabs(got - d2[m]);
        worst = std::max(worst, gap);
        if (gap > tol) {
            detail = "kernel coefficient off by " + std::to_string(gap) + " at m=" + std::to_string(m);
            return false;
        }
    }
    char buf[96];
    std::snprintf(buf, sizeof buf, "m=0..30 within max(1e-4, 10 est), worst gap %.3e", worst);
    detail = buf;
    return true;
}

bool criterion8(std::string& detail) {
    std::mt19937_64 gen(0xD1CE);
    std::vector<IncrementDistribution> dists;
    for (int i = 0; i < 10; ++i) dists.push_back(random_support_dist(gen));
    dists.push_back(IncrementDistribution::geometric(rat(1, 2)));
    dists.push_back(IncrementDistribution::harmonic());

    const auto grid = default_grid();
    double worst_gap = 0.0;
    for (const auto& d : dists) {
        const auto cosrep = check_strict_cos_bound(d, grid);
        if (!cosrep.pass) {
            detail = "cosine bound violated for " + d.describe();
            return false;
        }
        const auto modrep = check_kernel_modulus_bound(d, grid);
        if (!modrep.pass) {
            detail = "modulus bound violated for " + d.describe();
            return false;
        }
        worst_gap = std::max(worst_gap, modrep.real_axis_max_gap);
        if (modrep.real_axis_max_gap > 1e-12) {
            detail = "real-axis tightness gap " + std::to_string(modrep.real_axis_max_gap) + " for " + d.describe();
            return false;
        }
    }
    char buf[96];
    std::snprintf(buf, sizeof buf, "12 distributions x 2047 grid points, real-axis gap <= %.2e", worst_gap);
    detail = buf;
    return true;
}

bool criterion9(std::string& detail) {
    if (one_minus_cos_over_xsq(0.0) != 0.5) {
        detail = "kernel value at 0 is not exactly 1/2";
        return false;
    }
    for (int i = 0; i < 1000; ++i) {
        const double x = -kPi + kTwoPi * static_cast<double>(i) / 999.0;
        if (std::fabs(x * x * one_minus_cos_over_xsq(x) - (1.0 - std::cos(x))) > 1e-14) {
            detail = "x^2 G(x) misses 1 - cos x at x=" + std::to_string(x);
            return false;
        }
    }
    const auto d = IncrementDistribution::harmonic();
    const auto shrink = kernel_vanishing_delta(d, 1e-2);
    if (!shrink.found) {
        detail = "no delta found with sup|kernel| <= 1e-2";
        return false;
    }
    // verification sweep on a denser grid than the search used
    for (int ri = 0; ri <= 17; ++ri) {
        const double r = 1.0 - shrink.delta * static_cast<double>(ri) / 17.0;
        for (int ti = -29; ti <= 29; ++ti) {
            const double theta = shrink.delta * static_cast<double>(ti) / 29.0;
            if ((1.0 - r) + std::fabs(theta) > shrink.delta) continue;
            if (r == 1.0 && theta == 0.0) continue;
            if (std::abs(delta2_kernel(d, PolarPoint(r, theta)).value) > 1e-2) {
                detail = "kernel above 1e-2 inside the reported delta";
                return false;
            }
        }
    }
    char buf[96];
    std::snprintf(buf, sizeof buf, "kernel identity on 1000 x; |H| <= 1e-2 for (1-r)+|theta| <= %.4g", shrink.delta);
    detail = buf;
    return true;
}

bool criterion10(std::string& detail) {
    double worst_fraction = 1.0;
    for (const auto& d : {half_half(), IncrementDistribution::geometric(rat(1, 2))}) {
        const SimConfig cfg{d, 100, 1'000'000, 0x5EED};
        const auto est = simulate(cfg);
        const auto rep = compare_with_recurrence(est, compute_renewal(d, 100), 4.0);
        worst_fraction = std::min(worst_fraction, rep.pass_fraction);
        if (rep.pass_fraction < 0.999) {
            detail = "pass fraction " + std::to_string(rep.pass_fraction) + " for " + d.describe();
            return false;
        }
        const auto rerun = simulate(cfg);
        if (rerun.hits != est.hits) {
            detail = "same seed produced different estimates for " + d.describe();
            return false;
        }
    }
    char buf[96];
    std::snprintf(buf, sizeof buf, "10^6 trials x 2 distributions, min pass fraction %.5f, reruns bit-identical",
                  worst_fraction);
    detail = buf;
    return true;
}

struct Criterion {
    int id;
    const char* name;
    double time_limit;  // seconds; 0 = none
    std::function<bool(std::string&)> fn;
};

}  // namespace

int main() {
    const std::vector<Criterion> criteria{
        {1, "exact identity suite on 100 random rational distributions", 10.0, criterion1},
        {2, "finite-mean limit: closed forms and estimate_limit", 0.0, criterion2},
        {3, "infinite-mean bracket: hi = 1/H_{M+1}, empirical entry", 60.0, criterion3},
        {4, "bracket monotonicity and sandwich, M = 0..1000", 0.0, criterion4},
        {5, "interior quadrature equals recurrence at 1e-8", 60.0, criterion5},
        {6, "finite-mean boundary representation (geometric)", 0.0, criterion6},
        {7, "infinite-mean boundary representation (harmonic)", 0.0, criterion7},
        {8, "strict cosine and kernel modulus bounds on the default grid", 0.0, criterion8},
        {9, "cos-deficit kernel identities and kernel vanishing at (1,0)", 0.0, criterion9},
        {10, "Monte Carlo cross-validation, 10^6 trials", 120.0, criterion10},
    };

    int failures = 0;
    for (const auto& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        std::string detail;
        bool ok = false;
        try {
            ok = c.fn(detail);
        } catch (const std::exception& e) {
            detail = std::string("exception: ") + e.what();
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (ok && c.time_limit > 0.0 && secs > c.time_limit) {
            ok = false;
            detail += " [exceeded " + std::to_string(c.time_limit) + " s budget]";
        }
        std::printf("%s  %2d. %s (%s) [%.2f s]\n", ok ? "PASS" : "FAIL", c.id, c.name, detail.c_str(), secs);
        std::fflush(stdout);
        if (!ok) ++failures;
    }
    if (failures == 0)
        std::printf("all %zu criteria passed\n", criteria.size());
    else
        std::printf("%d criteria FAILED\n", failures);
    return failures;
}
