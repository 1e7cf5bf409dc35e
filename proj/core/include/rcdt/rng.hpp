#pragma once

#include <cstdint>

namespace rcdt {

/// Counter-based pseudo-random generator.
///
/// Output i is a pure function of (seed, i), so independently seeded
/// instances replay identical streams regardless of how draws are
/// interleaved elsewhere.  Streams for different seeds are uncorrelated
/// for practical purposes.
class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed) noexcept : seed_(seed) {}

    std::uint64_t next_u64() noexcept {
        std::uint64_t z = seed_ + 0x9e3779b97f4a7c15ull * ++counter_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    /// Uniform draw from [0, 1) with 53 bits of precision.
    double next_double() noexcept {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Uniform draw from [lo, hi).  Callers are expected to pass lo < hi.
    double uniform(double lo, double hi) noexcept {
        return lo + (hi - lo) * next_double();
    }

    /// Uniform integer in [0, n).  n must be positive.
    std::uint64_t next_below(std::uint64_t n) noexcept {
        // Modulo bias is below 2^-32 for the range sizes used here.
        return next_u64() % n;
    }

    std::uint64_t seed() const noexcept { return seed_; }
    std::uint64_t counter() const noexcept { return counter_; }

private:
    std::uint64_t seed_;
    std::uint64_t counter_ = 0;
};

}  // namespace rcdt
