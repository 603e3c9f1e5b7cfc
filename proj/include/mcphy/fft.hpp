#pragma once

#include <cstddef>
#include <vector>

#include "mcphy/common.hpp"

namespace mcphy {

// Iterative radix-2 FFT over a fixed power-of-two size.
//
// Twiddle factors and the bit-reversal permutation are tabulated once at
// construction (each twiddle from its exact angle, so rounding does not
// accumulate across butterflies), after which transforms are allocation-free
// and safe to share const across threads.
//
// Scaling convention:
//   forward:  X[m] = sum_k x[k] * exp(-j*2*pi*m*k/N)
//   inverse:  x[k] = sum_m X[m] * exp(+j*2*pi*m*k/N)   (no 1/N factor)
class Fft {
  public:
    explicit Fft(std::size_t n) : n_(n) {
        if (!is_power_of_two(n_))
            throw ConfigError("Fft: size must be a power of two, got " + std::to_string(n_));
        bitrev_.resize(n_);
        for (std::size_t i = 0, j = 0; i < n_; ++i) {
            bitrev_[i] = j;
            std::size_t bit = n_ >> 1;
            for (; j & bit; bit >>= 1) j ^= bit;
            j ^= bit;
        }
        twiddles_.resize(n_ / 2);
        for (std::size_t k = 0; k < n_ / 2; ++k) {
            const double ang = -2.0 * pi * static_cast<double>(k) / static_cast<double>(n_);
            twiddles_[k] = {std::cos(ang), std::sin(ang)};
        }
    }

    std::size_t size() const { return n_; }

    // In-place forward transform (negative exponent, unscaled).
    void forward(std::vector<cplx>& x) const { transform(x, false); }

    // In-place inverse transform (positive exponent, unscaled).
    void inverse(std::vector<cplx>& x) const { transform(x, true); }

  private:
    void transform(std::vector<cplx>& x, bool invert) const {
        if (x.size() != n_)
            throw FramingError("Fft: buffer size " + std::to_string(x.size()) +
                               " does not match transform size " + std::to_string(n_));
        for (std::size_t i = 0; i < n_; ++i) {
            const std::size_t j = bitrev_[i];
            if (i < j) std::swap(x[i], x[j]);
        }
        for (std::size_t len = 2; len <= n_; len <<= 1) {
            const std::size_t step = n_ / len;
            for (std::size_t start = 0; start < n_; start += len) {
                for (std::size_t k = 0; k < len / 2; ++k) {
                    cplx w = twiddles_[k * step];
                    if (invert) w = std::conj(w);
                    const cplx u = x[start + k];
                    const cplx v = x[start + k + len / 2] * w;
                    x[start + k] = u + v;
                    x[start + k + len / 2] = u - v;
                }
            }
        }
    }

    std::size_t n_;
    std::vector<std::size_t> bitrev_;
    std::vector<cplx> twiddles_;
};

}  // namespace mcphy
