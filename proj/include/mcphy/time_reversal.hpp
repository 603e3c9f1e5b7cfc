#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "mcphy/channel.hpp"
#include "mcphy/common.hpp"

namespace mcphy {

/*
 * Time-reversal prefiltering.  Transmitting through the conjugated,
 * time-reversed channel impulse response makes the end-to-end cascade equal
 * to the channel's autocorrelation: a conjugate-symmetric tap line whose
 * centre-aligned spectrum is real and non-negative.  A receiver that knows
 * only the cascade's group delay can therefore equalize with purely real
 * per-subcarrier gains.
 */

// Matched prefilter conj(reverse(h)); with normalize, unit-energy scaled so
// the prefilter does not change the average transmit power.
inline std::vector<cplx> tr_prefilter(const std::vector<cplx>& channel_taps,
                                      bool normalize = true) {
    if (channel_taps.empty()) throw ChannelError("channel must have at least one tap");
    double energy = 0.0;
    for (const cplx& t : channel_taps) energy += std::norm(t);
    if (energy <= 0.0) throw ChannelError("cannot prefilter an all-zero channel");
    const double scale = normalize ? 1.0 / std::sqrt(energy) : 1.0;
    std::vector<cplx> p(channel_taps.size());
    for (std::size_t l = 0; l < p.size(); ++l)
        p[l] = std::conj(channel_taps[channel_taps.size() - 1 - l]) * scale;
    return p;
}

// The prefilter/channel cascade and its centre-aligned per-subcarrier view.
struct EquivalentChannel {
    std::vector<cplx> taps;             // prefilter convolved with the channel
    std::size_t centre_index;           // group delay of the cascade, samples
    std::vector<double> freq_response;  // real part of the delay-compensated spectrum
    double max_imag_residual;           // worst imaginary leftover across subcarriers
};

// Builds the cascade c = prefilter (*) channel and evaluates its spectrum on an
// M-point grid with the group delay rotated out.  For a matched prefilter the
// rotated spectrum is real up to rounding; max_imag_residual reports how far
// from real it actually is (nonzero when the prefilter was built from an
// imperfect channel estimate).
inline EquivalentChannel equivalent_channel(const std::vector<cplx>& channel_taps,
                                            const std::vector<cplx>& prefilter, std::size_t M) {
    if (channel_taps.empty() || prefilter.empty())
        throw ChannelError("channel and prefilter must be non-empty");
    EquivalentChannel eq;
    eq.taps = apply_channel(channel_taps, prefilter);
    eq.centre_index = prefilter.size() - 1;
    const auto spectrum = channel_frequency_response(eq.taps, M);
    eq.freq_response.resize(M);
    eq.max_imag_residual = 0.0;
    for (std::size_t m = 0; m < M; ++m) {
        const double ang = 2.0 * pi * static_cast<double>(m) *
                           static_cast<double>(eq.centre_index) / static_cast<double>(M);
        const cplx aligned = spectrum[m] * cplx(std::cos(ang), std::sin(ang));
        eq.freq_response[m] = aligned.real();
        eq.max_imag_residual = std::max(eq.max_imag_residual, std::abs(aligned.imag()));
    }
    return eq;
}

}  // namespace mcphy
