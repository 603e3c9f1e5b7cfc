#pragma once

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "mcphy/common.hpp"

namespace mcphy {

/*
 * Rate-one real orthogonal space-time code over two antennas and two
 * signalling instants, applied independently per subcarrier.  For each time
 * pair (first, second) carrying symbols (a, b):
 *
 *     antenna 0 sends (a, -b)         antenna 1 sends (b, a)
 *
 * With per-subcarrier real gains H0, H1 the two received values decouple
 * through the transposed code matrix, scaled by 1 / (H0^2 + H1^2).  Real
 * gains keep the scheme valid for complex symbols as well, so the same code
 * serves both the real-symbol and the complex-symbol transceivers.
 */

// Splits a symbol grid (columns paired in time) into the two antenna grids.
template <typename T>
std::pair<Grid<T>, Grid<T>> gr2_encode(const Grid<T>& symbols) {
    if (symbols.cols() % 2 != 0)
        throw FramingError("space-time encoding needs an even number of columns");
    Grid<T> ant0(symbols.rows(), symbols.cols());
    Grid<T> ant1(symbols.rows(), symbols.cols());
    for (std::size_t t = 0; t < symbols.cols(); t += 2)
        for (std::size_t m = 0; m < symbols.rows(); ++m) {
            const T a = symbols.at(m, t);
            const T b = symbols.at(m, t + 1);
            ant0.at(m, t) = a;
            ant0.at(m, t + 1) = -b;
            ant1.at(m, t) = b;
            ant1.at(m, t + 1) = a;
        }
    return {std::move(ant0), std::move(ant1)};
}

// Inverts the code from the received per-subcarrier values given the two real
// antenna gains.  Subcarriers where both gains vanish cannot be decided; they
// decode to zero and are reported through the optional flag grid.
template <typename T>
Grid<T> gr2_decode(const Grid<T>& received, const std::vector<double>& gain0,
                   const std::vector<double>& gain1,
                   Grid<std::uint8_t>* singular = nullptr) {
    if (received.cols() % 2 != 0)
        throw FramingError("space-time decoding needs an even number of columns");
    if (gain0.size() != received.rows() || gain1.size() != received.rows())
        throw FramingError("one gain per subcarrier and antenna is required");
    Grid<T> decoded(received.rows(), received.cols());
    if (singular) *singular = Grid<std::uint8_t>(received.rows(), received.cols() / 2);
    for (std::size_t m = 0; m < received.rows(); ++m) {
        const double h0 = gain0[m];
        const double h1 = gain1[m];
        const double denom = h0 * h0 + h1 * h1;
        for (std::size_t t = 0; t < received.cols(); t += 2) {
            if (denom <= 0.0) {
                decoded.at(m, t) = T{};
                decoded.at(m, t + 1) = T{};
                if (singular) singular->at(m, t / 2) = 1;
                continue;
            }
            const T y0 = received.at(m, t);
            const T y1 = received.at(m, t + 1);
            decoded.at(m, t) = (h0 * y0 + h1 * y1) / denom;
            decoded.at(m, t + 1) = (h1 * y0 - h0 * y1) / denom;
        }
    }
    return decoded;
}

}  // namespace mcphy
