#include <doctest.h>

#include <random>
#include <vector>

#include "renewal/rational.hpp"
#include "renewal/sequence.hpp"

using namespace renewal;

namespace {

Sequence<Rational> seq(std::initializer_list<Rational> xs) { return Sequence<Rational>(std::vector<Rational>(xs)); }

Rational r(long n, long d) { return make_rational(n, d); }

Sequence<Rational> random_seq(std::mt19937_64& gen, std::size_t upto) {
    std::vector<Rational> t;
    for (std::size_t i = 0; i <= upto; ++i) {
        const long num = static_cast<long>(gen() % 17) - 8;
        const long den = static_cast<long>(gen() % 9) + 1;
        t.push_back(make_rational(num, den));
    }
    return Sequence<Rational>(std::move(t));
}

}  // namespace

TEST_CASE("convolution: hand-expanded Cauchy sums") {
    // c_0 = 0, c_1 = 0*1/2 + 1/2*1 = 1/2, c_2 = 0*3/4 + 1/2*1/2 + 1/2*1 = 3/4
    const auto a = seq({r(0, 1), r(1, 2), r(1, 2)});
    const auto b = seq({r(1, 1), r(1, 2), r(3, 4)});
    const auto c = convolve(a, b, 2);
    CHECK(c == seq({r(0, 1), r(1, 2), r(3, 4)}));
}

TEST_CASE("convolution: I is the identity, 1*1 counts") {
    std::mt19937_64 gen(7);
    const auto a = random_seq(gen, 9);
    CHECK(convolve(identity_seq<Rational>(9), a, 9) == a);
    CHECK(convolve(identity_seq<Rational>(5), ones_seq<Rational>(5), 5) == ones_seq<Rational>(5));
    CHECK(convolve(ones_seq<Rational>(3), ones_seq<Rational>(3), 3) ==
          seq({r(1, 1), r(2, 1), r(3, 1), r(4, 1)}));
}

TEST_CASE("convolution: commutative and associative, bit-exact") {
    std::mt19937_64 gen(11);
    for (int trial = 0; trial < 25; ++trial) {
        const auto a = random_seq(gen, 12);
        const auto b = random_seq(gen, 12);
        const auto c = random_seq(gen, 12);
        CHECK(convolve(a, b, 12) == convolve(b, a, 12));
        CHECK(convolve(convolve(a, b, 12), c, 12) == convolve(a, convolve(b, c, 12), 12));
    }
}

TEST_CASE("delta: hand values and order composition") {
    const auto p = seq({r(1, 1), r(1, 2), r(3, 4), r(5, 8)});
    CHECK(delta(p, 0) == p);
    CHECK(delta(p, 1) == seq({r(1, 1), r(-1, 2), r(1, 4), r(-1, 8)}));
    CHECK(delta(p, 2) == seq({r(1, 1), r(-3, 2), r(3, 4), r(-3, 8)}));
    CHECK(delta(seq({r(1, 1), r(1, 1), r(1, 1)}), 1) == seq({r(1, 1), r(0, 1), r(0, 1)}));
}

TEST_CASE("delta: composition and prefix-sum inverse") {
    std::mt19937_64 gen(23);
    for (int trial = 0; trial < 25; ++trial) {
        const auto a = random_seq(gen, 15);
        const unsigned j = static_cast<unsigned>(gen() % 3), k = static_cast<unsigned>(gen() % 3);
        CHECK(delta(a, j + k) == delta(delta(a, j), k));
        CHECK(prefix_sum(delta(a, 1)) == a);
        CHECK(delta(prefix_sum(a), 1) == a);
    }
}

TEST_CASE("errors: indexing and prefix-length preconditions") {
    const auto a = seq({r(1, 1), r(2, 1)});
    CHECK_THROWS_AS(a[2], std::out_of_range);
    CHECK_THROWS_AS(convolve(a, a, 2), std::invalid_argument);
    CHECK_THROWS_AS(Sequence<Rational>(std::vector<Rational>{}), std::invalid_argument);
}

TEST_CASE("float sequences share the algebra") {
    const Sequence<double> a(std::vector<double>{0.0, 0.5, 0.5});
    const Sequence<double> b(std::vector<double>{1.0, 0.5, 0.75});
    const auto c = convolve(a, b, 2);
    CHECK(c[0] == 0.0);
    CHECK(c[1] == 0.5);
    CHECK(c[2] == 0.75);
}
