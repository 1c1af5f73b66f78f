#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace spikerate::rng {

// SplitMix64; used for seeding and for deriving substream seeds.
struct SplitMix64 {
    std::uint64_t state;

    explicit SplitMix64(std::uint64_t seed) : state(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }
};

// xoshiro256++ — 256-bit state, splittable via derive_stream. Pinned for
// reproducibility: generated sequences are part of the output contract.
class Xoshiro256pp {
  public:
    explicit Xoshiro256pp(std::uint64_t seed) {
        SplitMix64 sm(seed);
        for (auto& w : s_) w = sm.next();
    }

    std::uint64_t next() {
        const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // Uniform on the open interval (0, 1): never returns 0 or 1.
    double uniform_open01() {
        return (static_cast<double>(next() >> 12) + 0.5) * 0x1.0p-52;
    }

    double exponential(double rate) { return -std::log(uniform_open01()) / rate; }

    // Box–Muller, one variate per call (two uniforms consumed, none cached),
    // so the draw count per call is fixed — required for stream reproducibility.
    double normal() {
        const double u1 = uniform_open01();
        const double u2 = uniform_open01();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

  private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
    std::uint64_t s_[4];
};

// Deterministic per-index substream: replicate k of a master seed gets its own
// generator, independent of evaluation order (parallel bootstrap contract).
inline Xoshiro256pp derive_stream(std::uint64_t master_seed, std::uint64_t index) {
    SplitMix64 sm(master_seed ^ (0xA3EC647659359ACDull * (index + 1)));
    return Xoshiro256pp(sm.next());
}

} // namespace spikerate::rng
