#pragma once

#include <cstdint>
#include <random>
#include <span>

namespace ergo {

/// SplitMix64 finalizer; used to derive independent stream keys.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Stream key for replicate `replicate` of an experiment seeded with `seed`.
/// Replicates are keyed independently so results never depend on scheduling.
constexpr std::uint64_t replicate_seed(std::uint64_t seed, std::uint64_t replicate) {
    return splitmix64(splitmix64(seed) ^ splitmix64(replicate + 0x632be59bd9b4e019ULL));
}

/// Portable generator: mt19937_64 is bit-specified by the standard, and the
/// double conversion below avoids the implementation-defined distributions.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform on [0, 1) with 53 bits of resolution.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Inverse-CDF draw from a probability row.
    int categorical(std::span<const double> row) {
        const double u = uniform();
        double acc = 0.0;
        int last_positive = 0;
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (row[i] <= 0.0) continue;
            acc += row[i];
            last_positive = static_cast<int>(i);
            if (u < acc) return static_cast<int>(i);
        }
        return last_positive;
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace ergo
