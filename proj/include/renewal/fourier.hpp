// Trapezoid quadrature of the Fourier-coefficient integrals
//   2 pi Delta^l[p]_m r^m = \int (1 - r e^{it})^l / (1 - f_q(r e^{it})) e^{-imt} dt
// and their r = 1 boundary forms (1/f_Q for finite mean, the delta2 kernel
// for infinite mean). These give a route to Delta^l[p] that is independent
// of the recurrence.

#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "renewal/distribution.hpp"

namespace renewal {

enum class IntegrandKind { DiskKernel, FiniteMeanBoundary, InfiniteMeanBoundary };

struct QuadratureResult {
    std::complex<double> value;  // integral over [-pi, pi]
    std::size_t panels = 0;
    // Panel-doubling convergence estimate |value(P) - value(P/2)|; a
    // heuristic, not a certified bound.
    double est_error = 0.0;
    IntegrandKind integrand = IntegrandKind::DiskKernel;
    unsigned diff_order = 0;     // l
    std::size_t coeff_index = 0; // m
    double radius = 1.0;         // r
};

// Interior integral for 0 < r < 1; value/(2 pi r^m) approximates
// Delta^l[p]_m. Evaluated internally in IEEE binary128: dividing out r^m
// (down to 2^-50 at r=0.5, m=50) amplifies node rounding noise far beyond
// double precision. Odd panel counts are rounded up to even.
QuadratureResult delta_coefficient_integral(const IncrementDistribution& d, unsigned diff_order, std::size_t m,
                                            double r, std::size_t panels);

// All (diff_order, m) coefficient integrals for m = 0..m_max at one radius,
// sharing the node evaluations of 1/(1 - f_q(r e^{it})). Results are ordered
// by diff_orders major, m minor.
std::vector<QuadratureResult> delta_coefficient_table(const IncrementDistribution& d,
                                                      std::span<const unsigned> diff_orders, std::size_t m_max,
                                                      double r, std::size_t panels);

// Boundary integral of 1/f_Q(e^{it}) e^{-imt}: value/(2 pi) approximates
// Delta[p]_m directly, no radial limit. Finite mean required.
QuadratureResult boundary_delta1_integral(const IncrementDistribution& d, std::size_t m, std::size_t panels);

// Boundary integral of the delta2 kernel at r = 1: value/(2 pi)
// approximates Delta^2[p]_m. Infinite mean required (callers with a finite
// mean should use boundary_delta1_integral).
QuadratureResult boundary_delta2_integral(const IncrementDistribution& d, std::size_t m, std::size_t panels);

struct DecayRow {
    std::size_t m = 0;
    double abs_delta = 0.0;  // |Delta^k[p]_m|
};

// Decay table of |Delta^k[p]_m| at the given indices (from the float
// recurrence), demonstrating the Fourier-coefficient decay that drives the
// limit argument.
std::vector<DecayRow> riemann_lebesgue_probe(const IncrementDistribution& d, unsigned diff_order,
                                             std::span<const std::size_t> m_values);

}  // namespace renewal
