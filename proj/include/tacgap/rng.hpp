#ifndef TACGAP_RNG_HPP
#define TACGAP_RNG_HPP

#include <cmath>
#include <cstdint>

namespace tacgap {

// PCG32 generator. We keep our own implementation instead of <random> engines
// so that streams are bit-identical across compilers and the full state fits
// in two u64 words inside checkpoints.
class Rng {
public:
    explicit Rng(std::uint64_t seed = 0x853c49e6748fea9bULL, std::uint64_t stream = 0xda3e39cb94b95bdbULL) {
        state_ = 0u;
        inc_ = (stream << 1u) | 1u;
        next_u32();
        state_ += seed;
        next_u32();
        has_cached_normal_ = false;
        cached_normal_ = 0.0;
    }

    std::uint32_t next_u32() {
        std::uint64_t old = state_;
        state_ = old * 6364136223846793005ULL + inc_;
        std::uint32_t xorshifted = static_cast<std::uint32_t>(((old >> 18u) ^ old) >> 27u);
        std::uint32_t rot = static_cast<std::uint32_t>(old >> 59u);
        return (xorshifted >> rot) | (xorshifted << ((-rot) & 31u));
    }

    // Uniform in [0, 1).
    double uniform() {
        return next_u32() * (1.0 / 4294967296.0);
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Uniform integer in [0, n).
    std::uint32_t uniform_u32(std::uint32_t n) {
        // Lemire-style rejection keeps the distribution exact.
        std::uint64_t m = static_cast<std::uint64_t>(next_u32()) * n;
        std::uint32_t lo = static_cast<std::uint32_t>(m);
        if (lo < n) {
            std::uint32_t t = (-n) % n;
            while (lo < t) {
                m = static_cast<std::uint64_t>(next_u32()) * n;
                lo = static_cast<std::uint32_t>(m);
            }
        }
        return static_cast<std::uint32_t>(m >> 32);
    }

    bool bernoulli(double p) { return uniform() < p; }

    // Standard normal via Box-Muller (cached second value).
    double normal() {
        if (has_cached_normal_) {
            has_cached_normal_ = false;
            return cached_normal_;
        }
        double u1 = 0.0;
        do {
            u1 = uniform();
        } while (u1 <= 1e-12);
        double u2 = uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        double theta = 2.0 * 3.14159265358979323846 * u2;
        cached_normal_ = r * std::sin(theta);
        has_cached_normal_ = true;
        return r * std::cos(theta);
    }

    double normal(double mean, double stddev) { return mean + stddev * normal(); }

    // Raw state accessors for checkpointing. The Box-Muller cache is dropped
    // on save; reseeding from (state, inc) therefore defines the stream.
    std::uint64_t state() const { return state_; }
    std::uint64_t inc() const { return inc_; }
    void set_state(std::uint64_t state, std::uint64_t inc) {
        state_ = state;
        inc_ = inc;
        has_cached_normal_ = false;
    }

    // Deterministic child stream, used to give every sample/epoch its own rng.
    Rng fork(std::uint64_t salt) const {
        std::uint64_t h = state_ ^ (salt * 0x9e3779b97f4a7c15ULL);
        h ^= h >> 33;
        h *= 0xff51afd7ed558ccdULL;
        h ^= h >> 33;
        return Rng(h, inc_ ^ (salt + 0x632be59bd9b4e019ULL));
    }

private:
    std::uint64_t state_;
    std::uint64_t inc_;
    bool has_cached_normal_;
    double cached_normal_;
};

}  // namespace tacgap

#endif
