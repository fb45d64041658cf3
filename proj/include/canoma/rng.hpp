#pragma once

// Portable, counter-derived random streams.
//
// std:: distributions are implementation-defined, so everything that must be
// bit-reproducible across standard libraries is built on the raw 64-bit
// output of xoshiro256** and the helpers below.

#include <array>
#include <cstdint>
#include <limits>

namespace canoma {

/// One step of the splitmix64 sequence; advances `state`.
std::uint64_t splitmix64(std::uint64_t& state) noexcept;

/// xoshiro256** 1.0 (Blackman & Vigna). Satisfies UniformRandomBitGenerator.
class Xoshiro256 {
public:
    using result_type = std::uint64_t;

    explicit Xoshiro256(std::uint64_t seed) noexcept;

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    result_type operator()() noexcept;

    friend bool operator==(const Xoshiro256&, const Xoshiro256&) = default;

private:
    std::array<std::uint64_t, 4> s_{};
};

using Rng = Xoshiro256;

/// Uniform double on [0, 1) with 53 random bits.
inline double uniform01(Rng& rng) noexcept {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Uniform double on (0, 1); never returns 0, safe for log().
inline double uniform_open01(Rng& rng) noexcept {
    return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

/// Generator for (seed, trial, stream). Distinct triples give statistically
/// independent streams; the mapping is fixed so results never depend on how
/// trials are scheduled across workers.
Rng trial_stream(std::uint64_t seed, std::uint64_t trial, std::uint64_t stream) noexcept;

}  // namespace canoma
