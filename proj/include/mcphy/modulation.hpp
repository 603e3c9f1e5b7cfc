#pragma once

#include <cstdint>
#include <vector>

#include "mcphy/common.hpp"

namespace mcphy {

/*
 * Gray-coded QPSK mapping and the real/imaginary staggering used by the
 * filter-bank transceiver.  One QPSK symbol carries two bits; staggering
 * spreads its real and imaginary parts over two consecutive real-valued
 * signalling instants on the same subcarrier.
 */

// Maps pairs of bits to unit-energy QPSK symbols: bit 0 selects the sign of
// the real part, bit 1 the sign of the imaginary part (0 -> +, 1 -> -).
inline std::vector<cplx> qpsk_modulate(const std::vector<std::uint8_t>& bits) {
    if (bits.size() % 2 != 0)
        throw FramingError("qpsk_modulate needs an even number of bits");
    std::vector<cplx> symbols(bits.size() / 2);
    for (std::size_t i = 0; i < symbols.size(); ++i) {
        const double re = bits[2 * i] ? -inv_sqrt2 : inv_sqrt2;
        const double im = bits[2 * i + 1] ? -inv_sqrt2 : inv_sqrt2;
        symbols[i] = cplx(re, im);
    }
    return symbols;
}

// Minimum-distance hard decision, the inverse of qpsk_modulate.  Components
// exactly on the boundary decide for bit 0.
inline std::vector<std::uint8_t> qpsk_hard_bits(const std::vector<cplx>& symbols) {
    std::vector<std::uint8_t> bits(2 * symbols.size());
    for (std::size_t i = 0; i < symbols.size(); ++i) {
        bits[2 * i] = symbols[i].real() < 0.0 ? 1 : 0;
        bits[2 * i + 1] = symbols[i].imag() < 0.0 ? 1 : 0;
    }
    return bits;
}

// Spreads each complex symbol over two real instants: column t of the complex
// grid becomes columns 2t (real part) and 2t+1 (imaginary part).
inline RealSymbolGrid oqam_stagger(const ComplexSymbolGrid& symbols) {
    RealSymbolGrid out(symbols.rows(), 2 * symbols.cols());
    for (std::size_t n = 0; n < symbols.cols(); ++n)
        for (std::size_t m = 0; m < symbols.rows(); ++m) {
            out.at(m, 2 * n) = symbols.at(m, n).real();
            out.at(m, 2 * n + 1) = symbols.at(m, n).imag();
        }
    return out;
}

// Reassembles complex symbols from staggered real instants.
inline ComplexSymbolGrid oqam_destagger(const RealSymbolGrid& instants) {
    if (instants.cols() % 2 != 0)
        throw FramingError("oqam_destagger needs an even number of instants");
    ComplexSymbolGrid out(instants.rows(), instants.cols() / 2);
    for (std::size_t n = 0; n < out.cols(); ++n)
        for (std::size_t m = 0; m < out.rows(); ++m)
            out.at(m, n) = cplx(instants.at(m, 2 * n), instants.at(m, 2 * n + 1));
    return out;
}

}  // namespace mcphy
