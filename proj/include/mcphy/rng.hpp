#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "mcphy/common.hpp"

namespace mcphy {

// SplitMix64 finaliser; the basis for all seed derivation so that per-frame
// substreams are decorrelated pure functions of their integer coordinates.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t seed_combine(std::uint64_t a, std::uint64_t b) {
    return splitmix64(a ^ (splitmix64(b) + 0x9e3779b97f4a7c15ULL));
}

inline std::uint64_t seed_combine(std::uint64_t a, std::uint64_t b, std::uint64_t c) {
    return seed_combine(seed_combine(a, b), c);
}

// Deterministic random source: uniform doubles and Gaussians from an
// explicitly seeded mt19937_64, with Box-Muller spelled out so the sample
// stream depends only on the seed (no library-specific distribution state).
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // Uniform in [0, 1) with 53-bit resolution.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    // Standard normal via Box-Muller (pairs cached).
    double gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double ang = 2.0 * pi * u2;
        spare_ = r * std::sin(ang);
        have_spare_ = true;
        return r * std::cos(ang);
    }

    cplx gaussian_cplx() {
        const double re = gaussian();
        const double im = gaussian();
        return {re, im};
    }

    // n random bits as 0/1 bytes.
    std::vector<std::uint8_t> bits(std::size_t n) {
        std::vector<std::uint8_t> out(n);
        std::uint64_t word = 0;
        int left = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (left == 0) {
                word = engine_();
                left = 64;
            }
            out[i] = static_cast<std::uint8_t>(word & 1u);
            word >>= 1;
            --left;
        }
        return out;
    }

  private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace mcphy
