#pragma once

// Reference implementations used only by tests. Everything here is computed
// straight from the defining formulas (explicit double sums, O(n^2) DFTs),
// deliberately independent of the library's optimised code paths.

#include <cmath>
#include <cstddef>
#include <vector>

#include "mcphy/common.hpp"

namespace oracle {

using mcphy::cplx;
using mcphy::RealSymbolGrid;

// Staggered-multicarrier basis function value f_{m,n}[k] at absolute sample
// index k for a prototype of length L over M subcarriers.
inline cplx basis(const std::vector<double>& f, std::size_t M, long m, long n, long k) {
    const long L = static_cast<long>(f.size());
    const long u = k - n * static_cast<long>(M) / 2;
    if (u < 0 || u >= L) return {0.0, 0.0};
    const double centre = (static_cast<double>(L) - 1.0) / 2.0;
    const double ang = (2.0 * mcphy::pi / static_cast<double>(M)) * static_cast<double>(m) *
                           (static_cast<double>(k) - centre) +
                       (mcphy::pi / 2.0) * static_cast<double>(m + n);
    return f[static_cast<std::size_t>(u)] * cplx{std::cos(ang), std::sin(ang)};
}

// Direct double-sum synthesis over all (m, n).
inline std::vector<cplx> synthesize_direct(const RealSymbolGrid& grid,
                                           const std::vector<double>& f) {
    const std::size_t M = grid.rows();
    const std::size_t N = grid.cols();
    const std::size_t len = (N - 1) * M / 2 + f.size();
    std::vector<cplx> s(len, cplx{0.0, 0.0});
    for (std::size_t k = 0; k < len; ++k)
        for (std::size_t m = 0; m < M; ++m)
            for (std::size_t n = 0; n < N; ++n)
                s[k] += grid.at(m, n) * basis(f, M, static_cast<long>(m), static_cast<long>(n),
                                              static_cast<long>(k));
    return s;
}

// Direct matched-filter analysis: y(m,n) = sum_k r[k] * conj(f_{m,n}[k]).
inline mcphy::ComplexSymbolGrid analyze_direct(const std::vector<cplx>& r,
                                               const std::vector<double>& f, std::size_t M,
                                               std::size_t N) {
    mcphy::ComplexSymbolGrid y(M, N);
    const long L = static_cast<long>(f.size());
    for (std::size_t m = 0; m < M; ++m)
        for (std::size_t n = 0; n < N; ++n) {
            cplx acc = 0.0;
            const long base = static_cast<long>(n) * static_cast<long>(M) / 2;
            for (long k = base; k < base + L; ++k) {
                if (k < 0 || k >= static_cast<long>(r.size())) continue;
                acc += r[static_cast<std::size_t>(k)] *
                       std::conj(basis(f, M, static_cast<long>(m), static_cast<long>(n), k));
            }
            y.at(m, n) = acc;
        }
    return y;
}

// Inner product <f_{m,n}, f_{m',n'}> = sum_k f_{m,n}[k] * conj(f_{m',n'}[k]).
inline cplx basis_inner_product(const std::vector<double>& f, std::size_t M, long m, long n,
                                long m2, long n2) {
    const long L = static_cast<long>(f.size());
    const long half = static_cast<long>(M) / 2;
    const long lo = std::min(n, n2) * half;
    const long hi = std::max(n, n2) * half + L;
    cplx acc = 0.0;
    for (long k = lo; k < hi; ++k)
        acc += basis(f, M, m, n, k) * std::conj(basis(f, M, m2, n2, k));
    return acc;
}

// Plain linear convolution.
inline std::vector<cplx> convolve_direct(const std::vector<cplx>& a, const std::vector<cplx>& b) {
    std::vector<cplx> out(a.size() + b.size() - 1, cplx{0.0, 0.0});
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
    return out;
}

// Plain O(n^2) DFT at M uniformly spaced frequencies.
inline std::vector<cplx> dft_direct(const std::vector<cplx>& x, std::size_t M) {
    std::vector<cplx> out(M, cplx{0.0, 0.0});
    for (std::size_t m = 0; m < M; ++m)
        for (std::size_t k = 0; k < x.size(); ++k) {
            const double ang = -2.0 * mcphy::pi * static_cast<double>(m) *
                               static_cast<double>(k) / static_cast<double>(M);
            out[m] += x[k] * cplx{std::cos(ang), std::sin(ang)};
        }
    return out;
}

// Power spectrum of a correlator-equivalent channel written as the explicit
// pairwise cosine/sine expansion: C(w) = sum_l |h_l|^2 +
// 2*sum_{k<l} [Re(h_k h_l*) cos((k-l)w) - Im(h_k* h_l) sin((k-l)w)].
inline double pairwise_power_spectrum(const std::vector<cplx>& h, double w) {
    double c = 0.0;
    for (const cplx& t : h) c += std::norm(t);
    for (std::size_t k = 0; k < h.size(); ++k)
        for (std::size_t l = k + 1; l < h.size(); ++l) {
            const double d = static_cast<double>(k) - static_cast<double>(l);
            c += 2.0 * ((h[k] * std::conj(h[l])).real() * std::cos(d * w) -
                        (std::conj(h[k]) * h[l]).imag() * std::sin(d * w));
        }
    return c;
}

// Gray-mapped quadrature theoretical bit error rate on the ideal additive
// white Gaussian noise channel.
inline double qpsk_awgn_ber(double ebn0_db) {
    return 0.5 * std::erfc(std::sqrt(std::pow(10.0, ebn0_db / 10.0)));
}

// Half-width of the 3-sigma binomial confidence interval on an error rate.
inline double binomial_ci3(double p, double bits) {
    return 3.0 * std::sqrt(std::max(p * (1.0 - p), 0.0) / bits);
}

}  // namespace oracle
