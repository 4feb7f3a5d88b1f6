#pragma once
// Deterministic random streams for reproducible experiments.
//
// Two fixed algorithms, both integer-exact across platforms:
//   splitmix64   (Steele/Lea/Vigna) — seeding and stream derivation
//   xoshiro256++ (Blackman/Vigna)   — the per-run generator
//
// Standard-library engines are deliberately not used anywhere: emitted
// fixtures are byte-exact and must not depend on the toolchain's choice
// of engine or distribution algorithm.
//
// Stream derivation: derive_seed(seed, k) pushes seed + (k+1)·GOLDEN through
// the splitmix64 finalizer, so run k owns an independent stream and the
// scheduling of parallel runs cannot affect any result.

#include <cmath>
#include <cstdint>
#include <numbers>

namespace qtow {

inline constexpr std::uint64_t kGoldenGamma = 0x9E3779B97F4A7C15ull;

constexpr std::uint64_t splitmix64_finalize(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

struct SplitMix64 {
    std::uint64_t state = 0;

    constexpr explicit SplitMix64(std::uint64_t seed) : state(seed) {}
    constexpr std::uint64_t next() { return splitmix64_finalize(state += kGoldenGamma); }
};

// The documented per-run mix function: run k of a batch seeded with s uses
// stream derive_seed(s, k).
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
    return splitmix64_finalize(seed + kGoldenGamma * (index + 1));
}

// xoshiro256++ with the reference update and splitmix64 state expansion.
class Xoshiro256pp {
public:
    explicit Xoshiro256pp(std::uint64_t seed) {
        SplitMix64 sm(seed);
        for (auto& word : state_) word = sm.next();
    }

    std::uint64_t next() {
        const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    // Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // Standard normal via Box–Muller. Exactly two uniforms are consumed per
    // call (no caching of the sine branch), so stream positions stay easy to
    // reason about.
    double normal() {
        const double u1 = 1.0 - uniform();  // (0, 1]: keeps log() finite
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

    bool bernoulli(double p) { return uniform() < p; }

private:
    static constexpr std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    std::uint64_t state_[4];
};

}  // namespace qtow
