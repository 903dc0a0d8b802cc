// Generating functions on the closed unit disk and the boundary kernels
// built from them, plus grid checks of the strict cosine-series bound and
// the kernel-modulus bound that the limit proofs hinge on.

#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "renewal/distribution.hpp"
#include "renewal/renewal.hpp"

namespace renewal {

// Evaluation coordinate z = r e^{i theta} with r in (0,1], theta in [-pi,pi].
// (1, 0) is the distinguished singular point of the kernels.
struct PolarPoint {
    double r;
    double theta;

    PolarPoint(double r_, double theta_);
    bool is_singular() const noexcept { return r == 1.0 && theta == 0.0; }
    std::complex<double> to_complex() const noexcept;
};

// A complex evaluation with a certified truncation bound (plus a small
// rounding allowance) on |computed - true|.
struct ComplexValue {
    std::complex<double> value;
    double err = 0.0;
};

// f_q(z) = sum q_n z^n. Exact finite supports and the named families
// evaluate in full (closed form for the families); custom series truncate
// at `budget` terms with error <= tail_bound(budget).
ComplexValue weight_gf(const IncrementDistribution& d, PolarPoint z, std::optional<std::size_t> budget = {});

// f_Q(z) = sum Q_n z^n; needs a finite mean (throws InfiniteMeanError).
// Satisfies (1-z) f_Q(z) = 1 - f_q(z) on the closed disk and never vanishes
// there.
ComplexValue tail_gf(const IncrementDistribution& d, PolarPoint z, std::optional<std::size_t> budget = {});

// Truncated f_p(z) = sum p_n z^n from a computed prefix; error bound
// r^{N+1}/(1-r) (p_n <= 1). Requires r < 1.
ComplexValue renewal_gf(const RenewalSequence<double>& p, PolarPoint z);

// Continuous extension of (1 - cos x) / x^2; equals 1/2 at x = 0. Uses the
// cosine series below |x| = 1e-4 where the quotient form cancels.
double one_minus_cos_over_xsq(double x);

// (1 - z)^2 / (1 - f_q(z)), extended by 0 at z = 1. Its boundary Fourier
// coefficients are 2*pi*Delta^2[p]_m; it extends continuously to the closed
// disk, with value 0 at the singular point.
ComplexValue delta2_kernel(const IncrementDistribution& d, PolarPoint z, std::optional<std::size_t> budget = {});

// Tensor grid r in {0.5, 0.9, 0.99, 1.0} x 512 equispaced theta, minus (1,0).
std::vector<PolarPoint> default_grid();

struct GridCheckReport {
    std::size_t points = 0;
    std::size_t violations = 0;
    double min_margin = 0.0;         // cosine bound: min over grid of 1 - sum - err
    double max_excess = 0.0;         // modulus bound: max over grid of |lhs| - rhs (<= tolerance)
    double real_axis_max_gap = 0.0;  // modulus bound: max ||lhs| - rhs| on theta = 0, r < 1 (tightness)
    bool pass = false;
};

// Checks sum q_n r^n cos(n theta) < 1 strictly (up to the evaluation error
// budget) at every grid point. Grid must exclude (1,0).
GridCheckReport check_strict_cos_bound(const IncrementDistribution& d, std::span<const PolarPoint> grid);

// Checks |(1-z)^2 / (1-f_q(z))| <= (1 + r^2 - 2 r cos theta) / (1 - sum q_n r^n cos n theta)
// at every grid point; on the real axis the two sides agree exactly, which
// is recorded as real_axis_max_gap.
GridCheckReport check_kernel_modulus_bound(const IncrementDistribution& d, std::span<const PolarPoint> grid);

struct DecompositionReport {
    // (i) 1 + r^2 - 2 r cos theta = (1-r)^2 + 4 r sin^2(theta/2)
    double trig_lhs = 0.0, trig_rhs = 0.0, trig_abs_diff = 0.0;
    // (ii) 1 - sum q_n r^n cos n theta
    //        = sum q_n (1 - r^n) + theta^2 sum n^2 q_n r^n G(n theta)
    // with G the extended (1-cos x)/x^2 kernel.
    double series_lhs = 0.0, series_rhs = 0.0, series_abs_diff = 0.0;
    double series_budget = 0.0;  // truncation + rounding allowance for (ii)
    bool pass = false;
};

DecompositionReport check_real_part_decomposition(const IncrementDistribution& d, PolarPoint z,
                                                  std::optional<std::size_t> budget = {});

struct ShrinkSearchResult {
    double delta = 0.0;    // largest ladder value with sup |kernel| <= eps
    double max_abs = 0.0;  // the sup attained at that delta
    bool found = false;
};

// Shrinking-grid search for a delta such that |delta2_kernel| <= eps whenever
// (1-r) + |theta| <= delta. Halves delta from delta_start until the sampled
// sup drops below eps.
ShrinkSearchResult kernel_vanishing_delta(const IncrementDistribution& d, double eps, double delta_start = 0.5,
                                          int max_halvings = 24);

}  // namespace renewal
