#ifndef DIMER_RNG_HPP
#define DIMER_RNG_HPP

#include <cmath>
#include <cstdint>

namespace dimer {

// Splittable seeding: a 64-bit master seed plus a stream index determine the
// whole stream, so replicas running in parallel never share state and results
// do not depend on thread scheduling.  Generator: xoshiro256** seeded through
// splitmix64.  Record "splitmix64+xoshiro256**" in run metadata.

inline uint64_t splitmix64_next(uint64_t& state) {
    uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

class RngStream {
  public:
    static constexpr const char* kGeneratorName = "splitmix64+xoshiro256**";

    RngStream(uint64_t seed, uint64_t stream) {
        uint64_t st = seed;
        splitmix64_next(st);
        st ^= 0xD1B54A32D192ED03ULL * (stream + 1);
        for (auto& w : s_) w = splitmix64_next(st);
        has_cached_normal_ = false;
    }

    uint64_t next_u64() {
        const uint64_t result = rotl(s_[1] * 5, 7) * 9;
        const uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // Uniform in [0,1).
    double next_double() { return double(next_u64() >> 11) * 0x1.0p-53; }

    // Unbiased uniform integer in [0, n).
    uint64_t next_below(uint64_t n) {
        const uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        uint64_t v;
        do {
            v = next_u64();
        } while (v >= limit);
        return v % n;
    }

    // Standard normal via Box-Muller (no rejection, so the draw count per
    // sample is fixed and streams stay aligned).
    double next_normal() {
        if (has_cached_normal_) {
            has_cached_normal_ = false;
            return cached_normal_;
        }
        double u1, u2;
        do {
            u1 = next_double();
        } while (u1 <= 0.0);
        u2 = next_double();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 6.283185307179586476925286766559 * u2;
        cached_normal_ = r * std::sin(a);
        has_cached_normal_ = true;
        return r * std::cos(a);
    }

  private:
    static uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
    uint64_t s_[4];
    double cached_normal_ = 0.0;
    bool has_cached_normal_ = false;
};

} // namespace dimer

#endif
