#pragma once

#include <cstdint>

namespace powermdp {

// Counter-based generator: every draw is a pure function of
// (seed, sample index, stream index, draw counter), so samples can be
// evaluated on any number of workers in any order and still be
// bit-identical.
namespace rng_detail {

inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += kGolden;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

inline std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
    return splitmix64(a + kGolden * (b + 1));
}

}  // namespace rng_detail

/// Uniform u64 for counter key (seed, index, stream, draw).
inline std::uint64_t counter_u64(std::uint64_t seed, std::uint64_t index,
                                 std::uint64_t stream, std::uint64_t draw) {
    using namespace rng_detail;
    std::uint64_t h = splitmix64(seed);
    h = mix(h, index);
    h = mix(h, stream);
    h = mix(h, draw);
    return h;
}

/// Uniform double in [0, 1), 53-bit resolution.
inline double counter_uniform(std::uint64_t seed, std::uint64_t index,
                              std::uint64_t stream, std::uint64_t draw) {
    return static_cast<double>(counter_u64(seed, index, stream, draw) >> 11) *
           0x1.0p-53;
}

/// Stream view bound to one (seed, sample index, stream): draws are counted.
class CounterRng {
public:
    CounterRng(std::uint64_t seed, std::uint64_t index, std::uint64_t stream = 0)
        : seed_(seed), index_(index), stream_(stream) {}

    double uniform() { return counter_uniform(seed_, index_, stream_, draw_++); }

    /// Uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n) {
        // Rejection-free modulo is fine here: n is tiny compared to 2^64.
        return counter_u64(seed_, index_, stream_, draw_++) % n;
    }

private:
    std::uint64_t seed_, index_, stream_;
    std::uint64_t draw_ = 0;
};

}  // namespace powermdp
