#pragma once

#include <cmath>
#include <cstdint>

namespace gfq {

/// splitmix64 mixing step (Steele/Lea/Flood). Used both as a stand-alone
/// stream derivation function and to seed the main generator.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += UINT64_C(0x9E3779B97F4A7C15));
    z = (z ^ (z >> 30)) * UINT64_C(0xBF58476D1CE4E5B9);
    z = (z ^ (z >> 27)) * UINT64_C(0x94D049BB133111EB);
    return z ^ (z >> 31);
}

/// Counter-based sub-stream key: replicate `rep` / lane `lane` of a run
/// seeded with `seed`. Two mixing rounds keep nearby (seed, rep) pairs
/// decorrelated. The same (seed, rep, lane) always yields the same stream,
/// so any parallel partition of replicates reproduces the sequential run.
inline std::uint64_t substream_key(std::uint64_t seed, std::uint64_t rep,
                                   std::uint64_t lane = 0) {
    std::uint64_t s = seed;
    std::uint64_t k = splitmix64(s);
    s = k ^ (rep * UINT64_C(0xBF58476D1CE4E5B9) + lane * UINT64_C(0x94D049BB133111EB) + 1);
    std::uint64_t out = splitmix64(s);
    out = splitmix64(s) ^ out;
    return out;
}

/// xoshiro256++ with a cached-Gaussian polar sampler.
class Rng {
  public:
    explicit Rng(std::uint64_t key) {
        std::uint64_t s = key;
        for (auto& w : state_) w = splitmix64(s);
    }

    static Rng substream(std::uint64_t seed, std::uint64_t rep, std::uint64_t lane = 0) {
        return Rng(substream_key(seed, rep, lane));
    }

    std::uint64_t next_u64() {
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

    /// Uniform in (0,1); never returns exactly 0.
    double uniform01() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    /// Standard normal via the Marsaglia polar method (second value cached).
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u, v, s;
        do {
            u = 2.0 * uniform01() - 1.0;
            v = 2.0 * uniform01() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double f = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * f;
        have_spare_ = true;
        return u * f;
    }

  private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    std::uint64_t state_[4]{};
    double spare_ = 0.0;
    bool have_spare_ = false;
};

} // namespace gfq
