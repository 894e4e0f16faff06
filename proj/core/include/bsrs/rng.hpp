#pragma once

#include <cstdint>
#include <random>

namespace bsrs {

/// Mixes a 64-bit value into a well-distributed seed. Used to derive
/// independent substreams from one experiment seed, so that runs stay
/// reproducible no matter which order a sweep executes them in.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Seeded random stream. The engine is std::mt19937_64 (its output sequence
/// is pinned by the standard); the distribution transforms are implemented
/// here instead of with std::uniform_*_distribution, whose algorithms differ
/// across standard libraries. Every draw is therefore reproducible from the
/// seed alone.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform double in [0, 1) with 53 random mantissa bits.
    double uniform01() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Uniform double in [lo, hi).
    double uniform(double lo, double hi) { return lo + uniform01() * (hi - lo); }

    /// Uniform integer in [0, n). Multiply-shift reduction; the bias of
    /// at most n / 2^64 is irrelevant at the sizes used here.
    int uniform_int(int n) {
        const auto x = static_cast<unsigned __int128>(next_u64());
        return static_cast<int>((x * static_cast<unsigned __int128>(n)) >> 64);
    }

    bool bernoulli(double p) { return uniform01() < p; }

private:
    std::mt19937_64 engine_;
};

}  // namespace bsrs
