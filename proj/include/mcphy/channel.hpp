#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "mcphy/common.hpp"
#include "mcphy/fft.hpp"
#include "mcphy/rng.hpp"

namespace mcphy {

/*
 * Tapped-delay-line fading channel.  A power/delay profile describes the
 * average strength and arrival time of each path; every frame draws
 * independent circular-Gaussian path gains (Rayleigh envelopes), constant for
 * the frame duration.  Delays are mapped onto the sample grid either by
 * rounding or through a short windowed-sinc interpolator.
 */
struct PowerDelayProfile {
    std::vector<double> delays_us;   // path arrival times, microseconds
    std::vector<double> powers_db;   // average path powers, dB relative

    void validate() const {
        if (delays_us.empty() || delays_us.size() != powers_db.size())
            throw ChannelError("power/delay profile needs matching, non-empty arrays");
        for (double d : delays_us)
            if (!(d >= 0.0)) throw ChannelError("path delays must be non-negative");
    }

    // Three-path urban-style profile used by the stock configurations.
    static PowerDelayProfile three_tap_default() {
        return PowerDelayProfile{{0.0, 0.2527, 0.32}, {0.0, -3.0, -2.2}};
    }
};

// How fractional-sample arrival times land on the sample grid.
enum class DelayRounding { floor_sample, nearest_sample, sinc8 };

inline std::string to_string(DelayRounding r) {
    switch (r) {
        case DelayRounding::floor_sample: return "floor";
        case DelayRounding::nearest_sample: return "nearest";
        case DelayRounding::sinc8: return "sinc8";
    }
    throw ConfigError("unknown delay rounding");
}

inline DelayRounding delay_rounding_from_string(const std::string& s) {
    if (s == "floor") return DelayRounding::floor_sample;
    if (s == "nearest") return DelayRounding::nearest_sample;
    if (s == "sinc8") return DelayRounding::sinc8;
    throw ConfigError("unknown delay rounding '" + s + "'");
}

// One drawn realization: baseband tap gains on the sample grid.
struct ChannelRealization {
    std::vector<cplx> taps;
};

// Average path powers as linear gains normalized to unit total.
inline std::vector<double> tap_powers_linear(const PowerDelayProfile& profile) {
    profile.validate();
    std::vector<double> p(profile.powers_db.size());
    double total = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        p[i] = std::pow(10.0, profile.powers_db[i] / 10.0);
        total += p[i];
    }
    for (double& v : p) v /= total;
    return p;
}

namespace detail {

// 8-tap Hamming-windowed cardinal-sine interpolation kernel value.
inline double sinc8_kernel(double x) {
    if (std::abs(x) >= 4.0) return 0.0;
    const double window = 0.54 + 0.46 * std::cos(pi * x / 4.0);
    if (x == 0.0) return window;
    return window * std::sin(pi * x) / (pi * x);
}

}  // namespace detail

// Draws one block-fading realization: independent complex Gaussian gains per
// path, spread onto integer sample delays according to the rounding mode.
inline ChannelRealization draw_channel(const PowerDelayProfile& profile, double sample_rate_hz,
                                       DelayRounding rounding, Rng& rng) {
    if (!(sample_rate_hz > 0.0)) throw ChannelError("sample rate must be positive");
    const std::vector<double> powers = tap_powers_linear(profile);
    ChannelRealization h;
    for (std::size_t i = 0; i < powers.size(); ++i) {
        const double delay_samples = profile.delays_us[i] * 1e-6 * sample_rate_hz;
        const cplx gain = std::sqrt(powers[i] / 2.0) * rng.gaussian_cplx();
        if (rounding == DelayRounding::sinc8) {
            const long base = static_cast<long>(std::floor(delay_samples));
            double kernel[8];
            double kernel_energy = 0.0;
            for (long j = base - 3; j <= base + 4; ++j) {
                const double k = j < 0 ? 0.0
                                       : detail::sinc8_kernel(static_cast<double>(j) - delay_samples);
                kernel[j - (base - 3)] = k;
                kernel_energy += k * k;
            }
            // Unit-energy kernel keeps the profile's power normalization intact
            // for fractional arrival times.
            const double scale = 1.0 / std::sqrt(kernel_energy);
            for (long j = base - 3; j <= base + 4; ++j) {
                const double k = kernel[j - (base - 3)] * scale;
                if (k == 0.0) continue;
                if (h.taps.size() <= static_cast<std::size_t>(j))
                    h.taps.resize(static_cast<std::size_t>(j) + 1, cplx(0.0, 0.0));
                h.taps[static_cast<std::size_t>(j)] += gain * k;
            }
        } else {
            const double rounded = rounding == DelayRounding::floor_sample
                                       ? std::floor(delay_samples)
                                       : std::round(delay_samples);
            const std::size_t pos = static_cast<std::size_t>(rounded);
            if (h.taps.size() <= pos) h.taps.resize(pos + 1, cplx(0.0, 0.0));
            h.taps[pos] += gain;
        }
    }
    return h;
}

// Linear convolution with the tap gains; output is input plus channel memory.
inline std::vector<cplx> apply_channel(const std::vector<cplx>& signal,
                                       const std::vector<cplx>& taps) {
    if (taps.empty()) throw ChannelError("channel must have at least one tap");
    std::vector<cplx> out(signal.size() + taps.size() - 1, cplx(0.0, 0.0));
    for (std::size_t l = 0; l < taps.size(); ++l) {
        if (taps[l] == cplx(0.0, 0.0)) continue;
        for (std::size_t k = 0; k < signal.size(); ++k) out[k + l] += taps[l] * signal[k];
    }
    return out;
}

// Mean squared magnitude of a sample stream.
inline double measure_power(const std::vector<cplx>& signal) {
    if (signal.empty()) return 0.0;
    double acc = 0.0;
    for (const cplx& v : signal) acc += std::norm(v);
    return acc / static_cast<double>(signal.size());
}

// Noise variance that realizes the requested SNR against a reference power;
// an infinite SNR asks for a noiseless pass.
inline double noise_variance_for_snr(double reference_power, double snr_db) {
    if (std::isinf(snr_db) && snr_db > 0.0) return 0.0;
    return reference_power * std::pow(10.0, -snr_db / 10.0);
}

// Adds circular complex Gaussian noise of the given total variance per sample.
inline void add_awgn(std::vector<cplx>& signal, double noise_variance, Rng& rng) {
    if (noise_variance < 0.0) throw ChannelError("noise variance must be non-negative");
    if (noise_variance == 0.0) return;
    const double sigma = std::sqrt(noise_variance / 2.0);
    for (cplx& v : signal) v += sigma * rng.gaussian_cplx();
}

// Per-subcarrier response of the tap set on an M-point grid (taps beyond M
// wrap around, matching the circular view a cyclic prefix enforces).
inline std::vector<cplx> channel_frequency_response(const std::vector<cplx>& taps, std::size_t M) {
    if (taps.empty()) throw ChannelError("channel must have at least one tap");
    if (M == 0 || !is_power_of_two(M))
        throw ConfigError("frequency grid size must be a power of two");
    std::vector<cplx> padded(M, cplx(0.0, 0.0));
    for (std::size_t l = 0; l < taps.size(); ++l) padded[l % M] += taps[l];
    Fft(M).forward(padded);
    return padded;
}

}  // namespace mcphy
