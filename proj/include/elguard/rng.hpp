#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace elguard {

/// splitmix64 generator. The whole sequence is a function of the seed, so any
/// language reimplementing the three constants below reproduces it exactly.
class Rng64 {
public:
    constexpr explicit Rng64(std::uint64_t seed = 0) noexcept : state_(seed) {}

    constexpr std::uint64_t next() noexcept {
        state_ += 0x9E3779B97F4A7C15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0, 1) from the top 53 bits.
    constexpr double uniform() noexcept {
        return static_cast<double>(next() >> 11) * 0x1.0p-53;
    }

    /// Integer in [0, bound). Plain modulo; bias is negligible for the small
    /// bounds used by the scene generator.
    constexpr std::uint64_t below(std::uint64_t bound) noexcept { return next() % bound; }

    /// Standard normal via Box-Muller. Consumes exactly two uniforms and
    /// returns the cosine branch only.
    double gauss() noexcept {
        const double u1 = uniform();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log1p(-u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

    constexpr std::uint64_t state() const noexcept { return state_; }

private:
    std::uint64_t state_;
};

} // namespace elguard
