#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "mcphy/common.hpp"
#include "mcphy/prototype_filter.hpp"

namespace mcphy {

/*
 * Interference structure of the staggered filter bank.  With real symbols and
 * a real, symmetric, near-orthogonal pulse, every demodulated value carries
 * the wanted symbol on its real axis plus a purely imaginary combination of
 * neighbouring symbols.  The combination is fully described by a small table
 * of pulse-dependent weights: the imaginary parts of the inner products
 * between lattice-shifted pulses and the origin pulse.
 */

// Inner product between the lattice pulse offset by (p subcarriers, q half
// instants) and the origin pulse.
inline cplx lattice_inner_product(const std::vector<double>& coeffs, std::size_t M, long p,
                                  long q) {
    const long L = static_cast<long>(coeffs.size());
    const double centre = (static_cast<double>(L) - 1.0) / 2.0;
    const long shift = q * static_cast<long>(M) / 2;
    cplx acc(0.0, 0.0);
    for (long u = std::max(0l, shift); u < std::min(L, L + shift); ++u) {
        const double ang = (2.0 * pi / static_cast<double>(M)) * static_cast<double>(p) *
                               (static_cast<double>(u) - centre) +
                           (pi / 2.0) * static_cast<double>(p + q);
        acc += coeffs[static_cast<std::size_t>(u - shift)] * coeffs[static_cast<std::size_t>(u)] *
               cplx(std::cos(ang), std::sin(ang));
    }
    return acc;
}

// Imaginary leakage weights over a rectangular neighbourhood of lattice
// offsets, plus the worst real-axis leak seen inside that neighbourhood.
struct InterferenceTable {
    std::size_t num_subcarriers = 0;
    long p_min = 0, p_max = 0;      // subcarrier offsets covered, inclusive
    long q_span = 0;                // half-instant offsets covered: |q| <= q_span
    std::vector<double> weights;    // imaginary parts, row-major over (p, q)
    double max_real_leak = 0.0;     // worst |Re| off-centre inside the span

    double weight(long p, long q) const {
        if (p < p_min || p > p_max || q < -q_span || q > q_span)
            throw ConfigError("lattice offset outside the tabulated span");
        const std::size_t row = static_cast<std::size_t>(p - p_min);
        const std::size_t col = static_cast<std::size_t>(q + q_span);
        return weights[row * static_cast<std::size_t>(2 * q_span + 1) + col];
    }
};

namespace detail {

inline InterferenceTable tabulate(const PrototypeFilter& f, long p_min, long p_max,
                                  long q_span) {
    InterferenceTable t;
    t.num_subcarriers = f.num_subcarriers;
    t.p_min = p_min;
    t.p_max = p_max;
    t.q_span = q_span;
    t.weights.resize(static_cast<std::size_t>(p_max - p_min + 1) *
                     static_cast<std::size_t>(2 * q_span + 1));
    for (long p = p_min; p <= p_max; ++p)
        for (long q = -q_span; q <= q_span; ++q) {
            const cplx ip = lattice_inner_product(f.coeffs, f.num_subcarriers, p, q);
            const std::size_t row = static_cast<std::size_t>(p - p_min);
            const std::size_t col = static_cast<std::size_t>(q + q_span);
            t.weights[row * static_cast<std::size_t>(2 * q_span + 1) + col] = ip.imag();
            if (p != 0 || q != 0) t.max_real_leak = std::max(t.max_real_leak, std::abs(ip.real()));
        }
    return t;
}

}  // namespace detail

// Symmetric neighbourhood |p| <= span_m, |q| <= span_n.  The subcarrier span
// must not alias: 2*span_m + 1 may not exceed the subcarrier count.
inline InterferenceTable interference_table(const PrototypeFilter& f, std::size_t span_m,
                                            std::size_t span_n) {
    if (2 * span_m + 1 > f.num_subcarriers)
        throw ConfigError("subcarrier span would alias around the grid");
    return detail::tabulate(f, -static_cast<long>(span_m), static_cast<long>(span_m),
                            static_cast<long>(span_n));
}

// Every lattice offset with support overlap, each subcarrier residue exactly
// once: p covers one full turn, q the pulse overlap extent.
inline InterferenceTable full_interference_table(const PrototypeFilter& f) {
    const long M = static_cast<long>(f.num_subcarriers);
    const long q_span = 2 * static_cast<long>(f.length() / f.num_subcarriers) - 1;
    return detail::tabulate(f, -M / 2 + 1, M / 2, q_span);
}

// Predicted imaginary leakage at every lattice point: neighbouring symbols
// combined under the tabulated weights, the per-row alternating sign, and the
// half-integer-centre sign flip where the subcarrier index wraps.  Time
// offsets beyond the burst contribute nothing.
inline RealSymbolGrid predict_intrinsic_interference(const RealSymbolGrid& sent,
                                                     const InterferenceTable& table) {
    if (sent.rows() != table.num_subcarriers)
        throw FramingError("grid row count must match the tabulated subcarrier count");
    const long M = static_cast<long>(sent.rows());
    const long N = static_cast<long>(sent.cols());
    RealSymbolGrid predicted(sent.rows(), sent.cols());
    for (long n = 0; n < N; ++n)
        for (long m = 0; m < M; ++m) {
            double acc = 0.0;
            for (long p = table.p_min; p <= table.p_max; ++p)
                for (long q = -table.q_span; q <= table.q_span; ++q) {
                    if (p == 0 && q == 0) continue;
                    const long nn = n + q;
                    if (nn < 0 || nn >= N) continue;
                    long mm = m + p;
                    double sign = (p * n) % 2 == 0 ? 1.0 : -1.0;
                    if (mm < 0) {
                        mm += M;
                        sign = -sign;
                    } else if (mm >= M) {
                        mm -= M;
                        sign = -sign;
                    }
                    acc += sign * table.weight(p, q) *
                           sent.at(static_cast<std::size_t>(mm), static_cast<std::size_t>(nn));
                }
            predicted.at(static_cast<std::size_t>(m), static_cast<std::size_t>(n)) = acc;
        }
    return predicted;
}

// Split of the demodulated imaginary parts into the tabulated prediction and
// whatever the table does not explain.
struct InterferenceDecomposition {
    RealSymbolGrid predicted;  // in-span imaginary leakage
    RealSymbolGrid residual;   // imaginary parts minus the prediction
    double max_predicted = 0.0;
    double max_residual = 0.0;
};

inline InterferenceDecomposition decompose_interference(const ComplexSymbolGrid& demodulated,
                                                        const RealSymbolGrid& sent,
                                                        const InterferenceTable& table) {
    if (demodulated.rows() != sent.rows() || demodulated.cols() != sent.cols())
        throw FramingError("demodulated and sent grids must share a shape");
    InterferenceDecomposition d;
    d.predicted = predict_intrinsic_interference(sent, table);
    d.residual = RealSymbolGrid(sent.rows(), sent.cols());
    for (std::size_t n = 0; n < sent.cols(); ++n)
        for (std::size_t m = 0; m < sent.rows(); ++m) {
            const double pred = d.predicted.at(m, n);
            const double res = demodulated.at(m, n).imag() - pred;
            d.residual.at(m, n) = res;
            d.max_predicted = std::max(d.max_predicted, std::abs(pred));
            d.max_residual = std::max(d.max_residual, std::abs(res));
        }
    return d;
}

// Leakage created by symbols outside a neighbourhood: the all-offsets
// prediction minus the prediction restricted to the given neighbourhood,
// evaluated by direct weight summation (no demodulation involved).
inline RealSymbolGrid out_of_span_interference(const RealSymbolGrid& sent,
                                               const PrototypeFilter& f,
                                               const InterferenceTable& neighbourhood) {
    const RealSymbolGrid everything =
        predict_intrinsic_interference(sent, full_interference_table(f));
    const RealSymbolGrid inside = predict_intrinsic_interference(sent, neighbourhood);
    RealSymbolGrid out(sent.rows(), sent.cols());
    for (std::size_t n = 0; n < sent.cols(); ++n)
        for (std::size_t m = 0; m < sent.rows(); ++m)
            out.at(m, n) = everything.at(m, n) - inside.at(m, n);
    return out;
}

// Second-moment localization of a pulse and its concentration score.
struct LocalizationMeasures {
    double time_spread = 0.0;          // std dev around the pulse centre, samples
    double freq_spread = 0.0;          // std dev of the spectrum, cycles/sample
    double uncertainty_product = 0.0;  // time_spread * freq_spread, >= 1/(4*pi)
    double concentration = 0.0;        // 1 / (4*pi*uncertainty_product), in (0, 1]
};

inline LocalizationMeasures localization_measures(const PrototypeFilter& f) {
    const auto moments = detail::pulse_moments(f.coeffs);
    LocalizationMeasures out;
    out.time_spread = moments.time_spread;
    out.freq_spread = moments.freq_spread;
    out.uncertainty_product = moments.time_spread * moments.freq_spread;
    out.concentration = 1.0 / (4.0 * pi * out.uncertainty_product);
    return out;
}

}  // namespace mcphy
