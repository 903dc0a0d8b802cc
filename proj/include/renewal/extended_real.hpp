// Extended nonnegative reals: a finite rational value or +infinity.
// Houses the mean of an increment distribution, with 1/infinity defined as 0.

#pragma once

#include <limits>
#include <stdexcept>

#include "renewal/rational.hpp"

namespace renewal {

class ExtendedReal {
public:
    static ExtendedReal infinite() { return ExtendedReal(); }

    explicit ExtendedReal(Rational v) : finite_(true), value_(std::move(v)) {
        if (value_ < 0) throw std::invalid_argument("extended real: value must be nonnegative");
    }

    bool is_infinite() const noexcept { return !finite_; }

    const Rational& value() const {
        if (!finite_) throw std::logic_error("extended real: no finite value (is infinite)");
        return value_;
    }

    // 1/x with the convention 1/infinity = 0.
    Rational reciprocal_or_zero() const {
        if (!finite_) return Rational(0);
        if (value_ == 0) throw std::domain_error("extended real: reciprocal of zero");
        return Rational(1) / value_;
    }

    double to_double() const { return finite_ ? renewal::to_double(value_) : std::numeric_limits<double>::infinity(); }

private:
    ExtendedReal() : finite_(false), value_(0) {}

    bool finite_;
    Rational value_;
};

}  // namespace renewal
