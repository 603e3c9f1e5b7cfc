#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mcphy/common.hpp"

namespace mcphy {

/*
 * One-tap per-subcarrier equalization of demodulated values.  Zero forcing
 * divides by the channel gain outright; the minimum mean-square variant
 * regularizes the inverse with the post-demodulation noise variance, trading
 * residual bias for noise amplification on faded subcarriers.
 */

enum class EqualizerType { zf, mmse };

inline std::string to_string(EqualizerType e) {
    return e == EqualizerType::zf ? "zf" : "mmse";
}

inline EqualizerType equalizer_from_string(const std::string& s) {
    if (s == "zf") return EqualizerType::zf;
    if (s == "mmse") return EqualizerType::mmse;
    throw ConfigError("unknown equalizer '" + s + "'");
}

// Applies the chosen one-tap inverse to every grid entry.  Subcarriers whose
// gain is numerically zero cannot be forced; they equalize to zero and are
// reported per subcarrier through the optional flag vector.
inline ComplexSymbolGrid equalize(const ComplexSymbolGrid& demodulated,
                                  const std::vector<cplx>& channel_gains, EqualizerType type,
                                  double noise_variance = 0.0,
                                  std::vector<std::uint8_t>* singular = nullptr) {
    if (channel_gains.size() != demodulated.rows())
        throw FramingError("one channel gain per subcarrier is required");
    if (noise_variance < 0.0) throw ConfigError("noise variance must be non-negative");
    ComplexSymbolGrid out(demodulated.rows(), demodulated.cols());
    if (singular) singular->assign(demodulated.rows(), 0);
    for (std::size_t m = 0; m < demodulated.rows(); ++m) {
        const double h2 = std::norm(channel_gains[m]);
        const double denom = type == EqualizerType::zf ? h2 : h2 + noise_variance;
        if (denom <= 0.0) {
            if (singular) (*singular)[m] = 1;
            for (std::size_t n = 0; n < demodulated.cols(); ++n) out.at(m, n) = cplx(0.0, 0.0);
            continue;
        }
        const cplx tap = std::conj(channel_gains[m]) / denom;
        for (std::size_t n = 0; n < demodulated.cols(); ++n)
            out.at(m, n) = demodulated.at(m, n) * tap;
    }
    return out;
}

}  // namespace mcphy
