// SplitMix64: tiny, well-mixed 64-bit generator. Per-trial streams are
// derived from (seed, stream index), so results do not depend on how trials
// are scheduled across threads.

#pragma once

#include <cstdint>

namespace renewal {

class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1), 53 random bits.
    double next_unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

private:
    std::uint64_t state_;
};

inline SplitMix64 stream_for(std::uint64_t seed, std::uint64_t stream) {
    // scramble the stream index through one SplitMix64 round keyed by seed
    SplitMix64 mixer(seed ^ (stream * 0xD1342543DE82EF95ull));
    return SplitMix64(mixer.next());
}

}  // namespace renewal
