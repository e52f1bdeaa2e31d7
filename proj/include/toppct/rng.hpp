#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace toppct {

// SplitMix64 finalizer (Vigna). Every seed/stream derivation in this library
// goes through this mixer, so the bit-exact mapping below is part of the
// file-format contract: rerunning with the same seeds reproduces identical
// output on any platform.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

constexpr std::uint64_t kGoldenGamma = 0x9E3779B97F4A7C15ull;

// One SplitMix64 step: advances the state and returns the mixed value.
constexpr std::uint64_t splitmix64(std::uint64_t& state) noexcept {
    state += kGoldenGamma;
    return mix64(state);
}

// xoshiro256** seeded by SplitMix64 expansion of a single 64-bit value.
// Uniform integers are drawn by rejection, so they are unbiased and the
// sequence does not depend on any standard-library distribution.
class Rng {
public:
    explicit Rng(std::uint64_t seed) noexcept {
        std::uint64_t s = seed;
        for (auto& word : state_) word = splitmix64(s);
    }

    std::uint64_t next() noexcept {
        const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    // Uniform in [0, bound); bound >= 1. Rejects from the low end so every
    // residue class is equally likely.
    std::uint64_t uniform_below(std::uint64_t bound) noexcept {
        const std::uint64_t threshold = (0 - bound) % bound;
        for (;;) {
            const std::uint64_t r = next();
            if (r >= threshold) return r % bound;
        }
    }

    // Uniform in [0, 1) with 53 random mantissa bits.
    double next_double() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // Standard normal deviate, Marsaglia polar method. Deviates come in
    // pairs; the second one is cached for the following call.
    double normal() noexcept {
        if (has_cached_) {
            has_cached_ = false;
            return cached_;
        }
        double u, v, s;
        do {
            u = 2.0 * next_double() - 1.0;
            v = 2.0 * next_double() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double f = std::sqrt(-2.0 * std::log(s) / s);
        cached_ = v * f;
        has_cached_ = true;
        return u * f;
    }

    double normal(double mean, double sigma) noexcept { return mean + sigma * normal(); }

private:
    static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
        return (x << k) | (x >> (64 - k));
    }

    std::array<std::uint64_t, 4> state_{};
    double cached_ = 0.0;
    bool has_cached_ = false;
};

// Stream derivation for per-trial generators. The seed of the stream for
// (level_index, size_index, trial_index) under a master seed is obtained by
// folding the three indices into the master seed, in that order:
//
//   h = master_seed
//   h = mix64(h + kGoldenGamma * (level_index + 1))
//   h = mix64(h + kGoldenGamma * (size_index + 1))
//   h = mix64(h + kGoldenGamma * (trial_index + 1))
//
// and the stream is Rng(h). Distinct index tuples give independent streams,
// and the mapping is stable across runs, platforms and thread counts.
constexpr std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t level_index,
                                    std::uint64_t size_index, std::uint64_t trial_index) noexcept {
    std::uint64_t h = master_seed;
    h = mix64(h + kGoldenGamma * (level_index + 1));
    h = mix64(h + kGoldenGamma * (size_index + 1));
    h = mix64(h + kGoldenGamma * (trial_index + 1));
    return h;
}

inline Rng derive_stream(std::uint64_t master_seed, std::uint64_t level_index,
                         std::uint64_t size_index, std::uint64_t trial_index) noexcept {
    return Rng(derive_seed(master_seed, level_index, size_index, trial_index));
}

}  // namespace toppct
