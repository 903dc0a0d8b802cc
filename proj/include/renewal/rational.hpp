// Exact rational scalars for the sequence algebra, backed by GMP.

#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace renewal {

// Exact-mode scalar: arbitrary-precision rational. Addition, multiplication
// and comparison never round. Float mode is plain IEEE double; operations
// that use it state their error bound where it matters.
using Rational = mpq_class;

inline Rational make_rational(long num, long den) {
    if (den == 0) throw std::invalid_argument("rational: zero denominator");
    Rational q(num, den);
    q.canonicalize();
    return q;
}

// Parses "num", "num/den" (base 10). Used by the distribution spec format,
// where rationals travel as strings so nothing is lost to binary floats.
inline Rational parse_rational(std::string_view text) {
    mpq_class q;
    if (text.empty() || mpq_set_str(q.get_mpq_t(), std::string(text).c_str(), 10) != 0)
        throw std::invalid_argument("rational: cannot parse '" + std::string(text) + "'");
    if (q.get_den() == 0)
        throw std::invalid_argument("rational: zero denominator in '" + std::string(text) + "'");
    q.canonicalize();
    return q;
}

// "num/den", or just "num" when the denominator is 1.
inline std::string format_rational(const Rational& q) {
    return q.get_str();
}

inline double to_double(const Rational& q) {
    return q.get_d();
}

// Exact conversion; every finite double is a dyadic rational.
inline Rational rational_from_double(double x) {
    return Rational(x);
}

inline Rational rational_pow(Rational base, std::uint64_t e) {
    Rational acc(1);
    while (e) {
        if (e & 1) acc *= base;
        base *= base;
        e >>= 1;
    }
    return acc;
}

}  // namespace renewal
