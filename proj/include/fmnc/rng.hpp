#pragma once

#include <cstdint>

namespace fmnc {

/// Deterministic 64-bit generator (splitmix64). The stream depends only on
/// the seed, never on the platform's distribution implementations, so every
/// report built from a seed is reproducible byte for byte.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, 1) with 53 random bits.
    double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    double range(double lo, double hi) { return lo + (hi - lo) * unit(); }

    /// Uniform on the dyadic lattice {k * 2^-bits} within [-amp, amp].
    /// Lattice samples keep translation/scaling tests exact in floating point.
    double dyadic(double amp, int bits = 20) {
        const double steps = static_cast<double>(1u << bits);
        const double u = static_cast<double>(next() % (2ull * (1ull << bits) + 1ull));
        return (u / steps - 1.0) * amp;
    }

    std::size_t below(std::size_t n) { return static_cast<std::size_t>(next() % n); }

private:
    std::uint64_t state_;
};

} // namespace fmnc
