#pragma once

#include <cstdint>

namespace excesslab {

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

/// Counter-based SplitMix64: the i-th output is mix64(seed + (i + 1) * golden).
/// Streams are reproducible across platforms and can be split by key.
class Rng {
public:
    static constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

    explicit Rng(std::uint64_t seed) : seed_(seed) {}

    /// Independent stream keyed by (seed, key).
    static Rng derive(std::uint64_t seed, std::uint64_t key) { return Rng(mix64(seed ^ mix64(key + kGolden))); }

    std::uint64_t next() { return mix64(seed_ + (++counter_) * kGolden); }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    /// Uniform on (0, 1].
    double uniform_positive() { return static_cast<double>((next() >> 11) + 1) * 0x1.0p-53; }

    /// Uniform on [0, bound), bound > 0, without modulo bias.
    std::uint64_t below(std::uint64_t bound) {
        const std::uint64_t limit = -bound % bound;  // 2^64 mod bound
        for (;;) {
            const std::uint64_t x = next();
            const unsigned __int128 prod = static_cast<unsigned __int128>(x) * bound;
            if (static_cast<std::uint64_t>(prod) >= limit) return static_cast<std::uint64_t>(prod >> 64);
        }
    }

    std::uint64_t seed() const { return seed_; }
    std::uint64_t counter() const { return counter_; }

private:
    std::uint64_t seed_;
    std::uint64_t counter_ = 0;
};

}  // namespace excesslab
