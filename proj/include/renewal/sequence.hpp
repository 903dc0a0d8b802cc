// Finite sequence prefixes and their convolution algebra: Cauchy product,
// difference operators, and the distinguished sequences I (convolution
// identity) and 1 (all ones).

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace renewal {

// A prefix a_0..a_N of a sequence. Immutable value type; operations return
// new sequences. Indexing outside [0, N] throws instead of zero-extending,
// so prefix-length bugs in convolution identities surface immediately.
template <class T>
class Sequence {
public:
    using value_type = T;

    explicit Sequence(std::vector<T> terms) : terms_(std::move(terms)) {
        if (terms_.empty()) throw std::invalid_argument("sequence: prefix must be non-empty");
    }

    std::size_t size() const noexcept { return terms_.size(); }
    std::size_t last_index() const noexcept { return terms_.size() - 1; }

    const T& operator[](std::size_t n) const {
        if (n >= terms_.size())
            throw std::out_of_range("sequence: index " + std::to_string(n) + " outside prefix [0, " +
                                    std::to_string(terms_.size() - 1) + "]");
        return terms_[n];
    }

    const std::vector<T>& terms() const noexcept { return terms_; }

    friend bool operator==(const Sequence&, const Sequence&) = default;

private:
    std::vector<T> terms_;
};

// I_0 = 1, I_n = 0: the convolution identity.
template <class T>
Sequence<T> identity_seq(std::size_t upto) {
    std::vector<T> t(upto + 1, T(0));
    t[0] = T(1);
    return Sequence<T>(std::move(t));
}

// 1_n = 1 for every n.
template <class T>
Sequence<T> ones_seq(std::size_t upto) {
    return Sequence<T>(std::vector<T>(upto + 1, T(1)));
}

// Cauchy convolution prefix: (a*b)_n = sum_{i=0}^n a_i b_{n-i} for n <= upto.
// Exact when T is Rational.
template <class T>
Sequence<T> convolve(const Sequence<T>& a, const Sequence<T>& b, std::size_t upto) {
    if (a.size() <= upto || b.size() <= upto)
        throw std::invalid_argument("convolve: insufficient prefix length for upto=" + std::to_string(upto));
    std::vector<T> out(upto + 1, T(0));
    for (std::size_t n = 0; n <= upto; ++n) {
        T acc(0);
        for (std::size_t i = 0; i <= n; ++i) acc += a[i] * b[n - i];
        out[n] = std::move(acc);
    }
    return Sequence<T>(std::move(out));
}

// k-fold difference: delta(a,0) = a; delta(a,1)_0 = a_0, delta(a,1)_n = a_n - a_{n-1}.
template <class T>
Sequence<T> delta(const Sequence<T>& a, unsigned k) {
    std::vector<T> cur = a.terms();
    for (unsigned pass = 0; pass < k; ++pass)
        for (std::size_t n = cur.size(); n-- > 1;) cur[n] = cur[n] - cur[n - 1];
    return Sequence<T>(std::move(cur));
}

// Cumulative sums; inverse of delta(.,1) on prefixes.
template <class T>
Sequence<T> prefix_sum(const Sequence<T>& a) {
    std::vector<T> out = a.terms();
    for (std::size_t n = 1; n < out.size(); ++n) out[n] += out[n - 1];
    return Sequence<T>(std::move(out));
}

}  // namespace renewal
