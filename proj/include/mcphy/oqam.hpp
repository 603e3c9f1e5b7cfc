#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "mcphy/common.hpp"
#include "mcphy/fft.hpp"
#include "mcphy/prototype_filter.hpp"

namespace mcphy {

/*
 * Polyphase filter-bank transceiver for offset-QAM multicarrier signals.
 *
 * Real symbols a(m, n) ride on subcarrier m at half-symbol instant n with a
 * quarter-turn phase ladder across the lattice, shaped by a prototype pulse
 * whose length is an integer multiple of the subcarrier count.  Synthesis
 * runs one unnormalized inverse FFT per instant followed by weighted
 * overlap-add; analysis is the matched filter bank (fold, forward FFT,
 * conjugate phase).  Both directions are exact realizations of the direct
 * per-subcarrier transform.
 */
class OqamModem {
public:
    explicit OqamModem(PrototypeFilter filter)
        : filter_(std::move(filter)),
          num_subcarriers_(filter_.num_subcarriers),
          fft_(filter_.num_subcarriers),
          axis_phase_(filter_.num_subcarriers) {
        const std::size_t len = filter_.length();
        if (num_subcarriers_ < 2 || !is_power_of_two(num_subcarriers_))
            throw ConfigError("subcarrier count must be a power of two and at least 2");
        if (len == 0 || len % num_subcarriers_ != 0)
            throw ConfigError("pulse length must be a positive multiple of the subcarrier count");
        overlap_ = len / num_subcarriers_;
        for (std::size_t m = 0; m < num_subcarriers_; ++m) {
            const double angle = pi * static_cast<double>(m) / static_cast<double>(num_subcarriers_);
            axis_phase_[m] = cplx(std::cos(angle), std::sin(angle));
        }
    }

    std::size_t num_subcarriers() const { return num_subcarriers_; }

    // Pulse length divided by the subcarrier count.
    std::size_t overlap_factor() const { return overlap_; }

    const PrototypeFilter& filter() const { return filter_; }

    // Sample count produced by (or required for) a burst of real instants.
    std::size_t signal_length(std::size_t num_instants) const {
        if (num_instants == 0) return 0;
        return (num_instants - 1) * num_subcarriers_ / 2 + filter_.length();
    }

    // Modulates a grid of real symbols (rows = subcarriers, columns = half-symbol
    // instants) into a complex baseband sample stream.
    std::vector<cplx> synthesize(const RealSymbolGrid& symbols) const {
        if (symbols.rows() != num_subcarriers_)
            throw FramingError("symbol grid row count must equal the subcarrier count");
        const std::size_t num_instants = symbols.cols();
        std::vector<cplx> signal(signal_length(num_instants), cplx(0.0, 0.0));
        const std::size_t len = filter_.length();
        std::vector<cplx> column(num_subcarriers_);
        for (std::size_t n = 0; n < num_instants; ++n) {
            for (std::size_t m = 0; m < num_subcarriers_; ++m)
                column[m] = symbols.at(m, n) * lattice_phase(m, n);
            fft_.inverse(column);
            const std::size_t base = n * num_subcarriers_ / 2;
            for (std::size_t u = 0; u < len; ++u)
                signal[base + u] += filter_.coeffs[u] * column[u % num_subcarriers_];
        }
        return signal;
    }

    // Correlates the received stream against every lattice pulse, returning the
    // complex demodulated values before any equalization or real projection.
    ComplexSymbolGrid analyze(const std::vector<cplx>& signal, std::size_t num_instants) const {
        if (signal.size() < signal_length(num_instants))
            throw FramingError("received signal is shorter than the requested burst");
        ComplexSymbolGrid out(num_subcarriers_, num_instants);
        const std::size_t len = filter_.length();
        std::vector<cplx> folded(num_subcarriers_);
        for (std::size_t n = 0; n < num_instants; ++n) {
            std::fill(folded.begin(), folded.end(), cplx(0.0, 0.0));
            const std::size_t base = n * num_subcarriers_ / 2;
            for (std::size_t u = 0; u < len; ++u)
                folded[u % num_subcarriers_] += signal[base + u] * filter_.coeffs[u];
            fft_.forward(folded);
            for (std::size_t m = 0; m < num_subcarriers_; ++m)
                out.at(m, n) = folded[m] * std::conj(lattice_phase(m, n));
        }
        return out;
    }

    // Unit phase attached to lattice point (m, n): a quarter-turn ladder plus a
    // fixed per-subcarrier tilt from centring the pulse on (length-1)/2.
    cplx lattice_phase(std::size_t m, std::size_t n) const {
        static const cplx quarter_turns[4] = {cplx(1.0, 0.0), cplx(0.0, 1.0),
                                              cplx(-1.0, 0.0), cplx(0.0, -1.0)};
        const std::size_t quarter = (m + n + 2 * m * n + 2 * m * overlap_) % 4;
        return quarter_turns[quarter] * axis_phase_[m];
    }

private:
    PrototypeFilter filter_;       // pulse shape shared by all subcarriers
    std::size_t num_subcarriers_;  // rows of the symbol grid
    std::size_t overlap_;          // pulse length / subcarrier count
    Fft fft_;                      // shared transform for both directions
    std::vector<cplx> axis_phase_; // per-subcarrier tilt e^{j*pi*m/M}
};

}  // namespace mcphy
