// Counter-based pseudorandom numbers for reproducible, parallel-safe sampling.
//
// The generator is the SplitMix64 sequence used in counter mode: the value at
// index i is mix(seed + (i+1)*GAMMA), a pure function of (seed, i). Sequential
// draws through CounterRng and indexed draws through value_at() produce the
// same stream, so a sampling loop can be partitioned across any number of
// workers without changing a single draw.

#pragma once

#include <cstdint>

namespace qcoarse {

namespace detail {

// SplitMix64 finalizer (Stafford mix13 variant).
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z ^= z >> 30;
    z *= 0xbf58476d1ce4e5b9ULL;
    z ^= z >> 27;
    z *= 0x94d049bb133111ebULL;
    z ^= z >> 31;
    return z;
}

constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;

} // namespace detail

// Stateless access: the i-th 64-bit value of the stream keyed by `seed`.
constexpr std::uint64_t rng_value_at(std::uint64_t seed, std::uint64_t index) noexcept {
    return detail::mix64(seed + (index + 1) * detail::kGamma);
}

// Derive an independent stream key from a base seed and a purpose tag.
constexpr std::uint64_t derive_stream(std::uint64_t seed, std::uint64_t tag) noexcept {
    return detail::mix64(seed ^ detail::mix64(tag + 0x632be59bd9b4e019ULL));
}

// Map 64 random bits to a double in [0, 1), 53-bit resolution.
constexpr double to_unit_double(std::uint64_t bits) noexcept {
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

// Seedable counter state. Copyable; owned by the caller.
struct CounterRng {
    std::uint64_t seed = 0;
    std::uint64_t counter = 0;

    explicit constexpr CounterRng(std::uint64_t s = 0, std::uint64_t start = 0) noexcept
        : seed(s), counter(start) {}

    constexpr std::uint64_t next() noexcept { return rng_value_at(seed, counter++); }

    // Uniform on [0, 1).
    constexpr double next_unit() noexcept { return to_unit_double(next()); }

    // Uniform on [-half_width, +half_width).
    constexpr double next_symmetric(double half_width) noexcept {
        return half_width * (2.0 * next_unit() - 1.0);
    }

    constexpr void skip(std::uint64_t n) noexcept { counter += n; }
};

} // namespace qcoarse
