#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "mcphy/analysis.hpp"
#include "mcphy/oqam.hpp"
#include "mcphy/rng.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

using namespace mcphy;
using test_support::cached_filter;

namespace {

RealSymbolGrid random_pm_grid(std::size_t M, std::size_t N, std::uint64_t seed) {
    Rng rng(seed);
    RealSymbolGrid grid(M, N);
    for (std::size_t n = 0; n < N; ++n)
        for (std::size_t m = 0; m < M; ++m)
            grid.at(m, n) = rng.uniform() < 0.5 ? -inv_sqrt2 : inv_sqrt2;
    return grid;
}

}  // namespace

TEST_CASE("tabulated weights equal the direct inner products") {
    const auto& f = cached_filter(FilterName::iota4, 16);
    const auto table = interference_table(f, 2, 3);
    double oracle_real_leak = 0.0;
    for (long p = -2; p <= 2; ++p)
        for (long q = -3; q <= 3; ++q) {
            const cplx direct = oracle::basis_inner_product(f.coeffs, 16, p, q, 0, 0);
            REQUIRE(table.weight(p, q) == Catch::Approx(direct.imag()).margin(1e-12));
            if (p != 0 || q != 0) oracle_real_leak = std::max(oracle_real_leak, std::abs(direct.real()));
        }
    REQUIRE(table.max_real_leak == Catch::Approx(oracle_real_leak).margin(1e-12));
}

TEST_CASE("self term is purely real unity") {
    for (FilterName name : {FilterName::iota4, FilterName::tfl1}) {
        const auto& f = cached_filter(name, 16);
        const cplx self = lattice_inner_product(f.coeffs, 16, 0, 0);
        REQUIRE(self.real() == Catch::Approx(1.0).margin(1e-12));
        REQUIRE(std::abs(self.imag()) <= 1e-12);
        REQUIRE(std::abs(interference_table(f, 1, 1).weight(0, 0)) <= 1e-12);
    }
}

TEST_CASE("weight magnitudes are symmetric under offset negation") {
    for (FilterName name : {FilterName::iota4, FilterName::tfl1}) {
        const auto& f = cached_filter(name, 16);
        const auto table = interference_table(f, 3, 3);
        for (long p = -3; p <= 3; ++p)
            for (long q = -3; q <= 3; ++q)
                REQUIRE(std::abs(table.weight(p, q)) ==
                        Catch::Approx(std::abs(table.weight(-p, -q))).margin(1e-10));
    }
}

TEST_CASE("real leakage vanishes when either offset is odd") {
    for (FilterName name : {FilterName::iota4, FilterName::tfl1}) {
        const auto& f = cached_filter(name, 16);
        for (long p = -3; p <= 3; ++p)
            for (long q = -3; q <= 3; ++q) {
                if (p % 2 == 0 && q % 2 == 0) continue;
                REQUIRE(std::abs(lattice_inner_product(f.coeffs, 16, p, q).real()) <= 1e-10);
            }
    }
}

TEST_CASE("first-ring weights of the long pulse match frozen regression values") {
    const auto& f = cached_filter(FilterName::iota4, 16);
    const auto table = interference_table(f, 1, 1);
    REQUIRE(table.weight(1, 0) == Catch::Approx(0.441096837213).margin(1e-9));
    REQUIRE(table.weight(0, 1) == Catch::Approx(0.441055710275).margin(1e-9));
    REQUIRE(table.weight(-1, 0) == Catch::Approx(-0.441096837213).margin(1e-9));
    REQUIRE(table.weight(0, -1) == Catch::Approx(-0.441055710275).margin(1e-9));
}

TEST_CASE("full-span prediction explains the demodulated imaginary parts exactly") {
    for (std::size_t M : {8u, 16u, 32u}) {
        const auto& f = cached_filter(FilterName::tfl1, M);
        OqamModem modem(f);
        const auto grid = random_pm_grid(M, 10, 31 + M);
        const auto demod = modem.analyze(modem.synthesize(grid), 10);
        const auto d = decompose_interference(demod, grid, full_interference_table(f));
        CAPTURE(M, d.max_residual);
        REQUIRE(d.max_residual <= 1e-8);
        REQUIRE(d.max_predicted > 0.1);  // leakage genuinely present
    }
    const auto& iota = cached_filter(FilterName::iota4, 16);
    OqamModem modem(iota);
    const auto grid = random_pm_grid(16, 10, 77);
    const auto demod = modem.analyze(modem.synthesize(grid), 10);
    const auto d = decompose_interference(demod, grid, full_interference_table(iota));
    REQUIRE(d.max_residual <= 1e-8);
}

TEST_CASE("moderate spans meet the documented prediction accuracy") {
    const auto& iota = cached_filter(FilterName::iota4, 16);
    OqamModem modem(iota);
    const auto grid = random_pm_grid(16, 12, 202);
    const auto demod = modem.analyze(modem.synthesize(grid), 12);
    const auto d = decompose_interference(demod, grid, interference_table(iota, 5, 5));
    REQUIRE(d.max_residual <= 2e-3);
}

TEST_CASE("a single symbol spreads exactly as the shifted weight pattern") {
    const std::size_t M = 16, N = 9;
    const auto& f = cached_filter(FilterName::tfl1, M);
    OqamModem modem(f);
    RealSymbolGrid grid(M, N);
    grid.at(3, 4) = 1.0;
    const auto demod = modem.analyze(modem.synthesize(grid), N);
    const auto predicted = predict_intrinsic_interference(grid, full_interference_table(f));
    for (std::size_t n = 0; n < N; ++n)
        for (std::size_t m = 0; m < M; ++m)
            REQUIRE(predicted.at(m, n) == Catch::Approx(demod.at(m, n).imag()).margin(1e-12));
}

TEST_CASE("zero grid predicts zero interference") {
    const auto& f = cached_filter(FilterName::tfl1, 16);
    const auto predicted =
        predict_intrinsic_interference(RealSymbolGrid(16, 4), interference_table(f, 1, 1));
    for (std::size_t n = 0; n < 4; ++n)
        for (std::size_t m = 0; m < 16; ++m) REQUIRE(predicted.at(m, n) == 0.0);
}

TEST_CASE("out-of-neighbourhood leakage equals the demodulated leftover") {
    const std::size_t M = 16, N = 10;
    const auto& f = cached_filter(FilterName::tfl1, M);
    OqamModem modem(f);
    const auto grid = random_pm_grid(M, N, 404);
    const auto demod = modem.analyze(modem.synthesize(grid), N);
    const auto omega = interference_table(f, 1, 1);
    const auto direct = out_of_span_interference(grid, f, omega);
    const auto d = decompose_interference(demod, grid, omega);
    for (std::size_t n = 0; n < N; ++n)
        for (std::size_t m = 0; m < M; ++m)
            REQUIRE(direct.at(m, n) == Catch::Approx(d.residual.at(m, n)).margin(1e-10));
}

TEST_CASE("analysis rejects malformed spans and shapes") {
    const auto& f = cached_filter(FilterName::tfl1, 8);
    REQUIRE_THROWS_AS(interference_table(f, 4, 1), ConfigError);  // 2*4+1 > 8 aliases
    const auto table = interference_table(f, 1, 1);
    REQUIRE_THROWS_AS(table.weight(2, 0), ConfigError);
    REQUIRE_THROWS_AS(predict_intrinsic_interference(RealSymbolGrid(4, 4), table), FramingError);
    REQUIRE_THROWS_AS(
        decompose_interference(ComplexSymbolGrid(8, 4), RealSymbolGrid(8, 5), table),
        FramingError);
}

TEST_CASE("localization scores rank the pulses sensibly") {
    const auto rect = localization_measures(cached_filter(FilterName::rect, 16));
    const auto iota = localization_measures(cached_filter(FilterName::iota4, 16));
    const auto tfl = localization_measures(cached_filter(FilterName::tfl1, 16));
    for (const auto& lm : {rect, iota, tfl}) {
        REQUIRE(lm.concentration > 0.0);
        REQUIRE(lm.concentration <= 1.0);
        REQUIRE(lm.uncertainty_product >= (1.0 - 1e-6) / (4.0 * pi));
    }
    REQUIRE(iota.concentration > rect.concentration);
    REQUIRE(tfl.concentration > rect.concentration);
}
