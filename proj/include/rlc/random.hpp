#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <limits>

namespace rlc {

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Small counter-based generator. Each stream is keyed by a tuple of integers
/// (seed, edge endpoints, trial index, ...) so that the numbers a trial sees
/// do not depend on the order in which trials are evaluated.
///
/// Satisfies UniformRandomBitGenerator, so it plugs into <random> distributions.
class StreamRng {
public:
    using result_type = std::uint64_t;

    explicit StreamRng(std::uint64_t key = 0) noexcept : key_(key) {}

    static StreamRng derive(std::initializer_list<std::uint64_t> parts) noexcept {
        std::uint64_t h = 0x6a09e667f3bcc909ULL;
        for (auto p : parts) h = mix64(h ^ mix64(p));
        return StreamRng(h);
    }

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    result_type operator()() noexcept { return mix64(key_ ^ mix64(counter_++)); }

    /// Uniform double in [0, 1).
    double uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

/// Standard normal draw (Marsaglia polar method). Written out rather than using
/// std::normal_distribution so streams are identical across standard libraries.
inline double standard_normal(StreamRng& rng) noexcept {
    double u, v, s;
    do {
        u = 2.0 * rng.uniform() - 1.0;
        v = 2.0 * rng.uniform() - 1.0;
        s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    return u * std::sqrt(-2.0 * std::log(s) / s);
}

} // namespace rlc
