#pragma once
// Seedable splitmix64 generator; identical output on every platform, which
// keeps traces and synthetic instances replayable.

#include <cstdint>

namespace bindesign::detail {

struct SplitMix64 {
    std::uint64_t state = 0;

    explicit constexpr SplitMix64(std::uint64_t seed) : state(seed) {}

    constexpr std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // uniform in [0, n)
    std::uint64_t below(std::uint64_t n) {
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(next()) * n) >> 64);
    }

    // uniform in [lo, hi], inclusive
    int range(int lo, int hi) {
        return lo + static_cast<int>(below(static_cast<std::uint64_t>(hi - lo) + 1));
    }

    bool coin() { return (next() & 1u) != 0; }

    // true with probability p, where p is premultiplied by 2^64
    bool chance(std::uint64_t scaled_p) { return next() < scaled_p; }
};

constexpr std::uint64_t scale_probability(double p) {
    if (p <= 0.0) return 0;
    if (p >= 1.0) return ~0ULL;
    return static_cast<std::uint64_t>(p * 18446744073709551616.0);
}

}  // namespace bindesign::detail
