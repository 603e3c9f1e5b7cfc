#pragma once

#include <cstddef>
#include <vector>

#include "mcphy/common.hpp"
#include "mcphy/fft.hpp"

namespace mcphy {

/*
 * Conventional multicarrier transceiver with a cyclic prefix.  Each column of
 * complex symbols is carried by one unitary inverse FFT, preceded by a copy
 * of its own tail; as long as the prefix covers the channel memory, linear
 * convolution acts circularly on the payload and a one-tap equalizer per
 * subcarrier restores the symbols.
 */
class CpOfdmModem {
public:
    CpOfdmModem(std::size_t num_subcarriers, std::size_t cp_length)
        : num_subcarriers_(num_subcarriers),
          cp_length_(cp_length),
          fft_(num_subcarriers),
          scale_(1.0 / std::sqrt(static_cast<double>(num_subcarriers))) {
        if (num_subcarriers < 2 || !is_power_of_two(num_subcarriers))
            throw ConfigError("subcarrier count must be a power of two and at least 2");
    }

    std::size_t num_subcarriers() const { return num_subcarriers_; }
    std::size_t cp_length() const { return cp_length_; }

    // Samples occupied by one prefixed symbol.
    std::size_t symbol_length() const { return num_subcarriers_ + cp_length_; }

    // Samples occupied by a burst of whole symbols.
    std::size_t signal_length(std::size_t num_symbols) const {
        return num_symbols * symbol_length();
    }

    // Unitary inverse transform per column plus cyclic prefix, serialized.
    std::vector<cplx> modulate(const ComplexSymbolGrid& symbols) const {
        if (symbols.rows() != num_subcarriers_)
            throw FramingError("symbol grid row count must equal the subcarrier count");
        std::vector<cplx> signal(signal_length(symbols.cols()));
        std::vector<cplx> block(num_subcarriers_);
        for (std::size_t n = 0; n < symbols.cols(); ++n) {
            for (std::size_t m = 0; m < num_subcarriers_; ++m)
                block[m] = symbols.at(m, n) * scale_;
            fft_.inverse(block);
            const std::size_t base = n * symbol_length();
            for (std::size_t u = 0; u < cp_length_; ++u)
                signal[base + u] =
                    block[(num_subcarriers_ - cp_length_ % num_subcarriers_ + u) % num_subcarriers_];
            for (std::size_t u = 0; u < num_subcarriers_; ++u)
                signal[base + cp_length_ + u] = block[u];
        }
        return signal;
    }

    // Strips each prefix and applies the unitary forward transform, returning
    // the per-subcarrier values before equalization.
    ComplexSymbolGrid demodulate(const std::vector<cplx>& signal, std::size_t num_symbols) const {
        if (signal.size() < signal_length(num_symbols))
            throw FramingError("received signal is shorter than the requested burst");
        ComplexSymbolGrid out(num_subcarriers_, num_symbols);
        std::vector<cplx> block(num_subcarriers_);
        for (std::size_t n = 0; n < num_symbols; ++n) {
            const std::size_t base = n * symbol_length() + cp_length_;
            for (std::size_t u = 0; u < num_subcarriers_; ++u) block[u] = signal[base + u];
            fft_.forward(block);
            for (std::size_t m = 0; m < num_subcarriers_; ++m)
                out.at(m, n) = block[m] * scale_;
        }
        return out;
    }

private:
    std::size_t num_subcarriers_;  // FFT size
    std::size_t cp_length_;        // prefix samples per symbol
    Fft fft_;                      // shared transform for both directions
    double scale_;                 // unitary normalization 1/sqrt(M)
};

}  // namespace mcphy
