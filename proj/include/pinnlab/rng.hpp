// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace pinnlab {

/// SplitMix64 (Steele, Lea, Flood 2014): a 64-bit counter-based generator.
/// Each draw advances the counter by a fixed odd constant and scrambles it
/// with a finalizer, so the stream is a pure function of (seed, draw index)
/// and identical on every platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0, 1) with 53 random mantissa bits.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform double in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Standard normal via Box-Muller; draws are consumed in pairs.
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        // u1 in (0,1] so the log is finite.
        double u1 = 1.0 - uniform();
        double u2 = uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        double a = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    double normal(double mean, double stddev) { return mean + stddev * normal(); }

    /// Integer in [0, n), rejection-free modulo bias is negligible for n << 2^64.
    std::uint64_t below(std::uint64_t n) { return next_u64() % n; }

    /// Derive an independent stream for a named purpose. Streams for
    /// different tags never collide for the same base seed.
    static Rng derive(std::uint64_t seed, std::uint64_t tag) {
        Rng mixer(seed ^ (0xD6E8FEB86659FD93ULL * (tag + 1)));
        return Rng(mixer.next_u64());
    }

private:
    std::uint64_t state_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace pinnlab
