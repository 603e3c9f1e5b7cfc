#include <catch2/catch_amalgamated.hpp>

#include <vector>

#include "mcphy/equalizer.hpp"
#include "mcphy/rng.hpp"

using namespace mcphy;

namespace {

ComplexSymbolGrid random_grid(std::size_t M, std::size_t N, std::uint64_t seed) {
    Rng rng(seed);
    ComplexSymbolGrid g(M, N);
    for (std::size_t n = 0; n < N; ++n)
        for (std::size_t m = 0; m < M; ++m) g.at(m, n) = rng.gaussian_cplx();
    return g;
}

}  // namespace

TEST_CASE("forcing the channel inverse restores the symbols") {
    const std::size_t M = 8, N = 5;
    const auto symbols = random_grid(M, N, 1);
    Rng rng(2);
    std::vector<cplx> H(M);
    for (auto& h : H) h = rng.gaussian_cplx();
    ComplexSymbolGrid y(M, N);
    for (std::size_t n = 0; n < N; ++n)
        for (std::size_t m = 0; m < M; ++m) y.at(m, n) = H[m] * symbols.at(m, n);
    const auto zf = equalize(y, H, EqualizerType::zf);
    const auto mmse0 = equalize(y, H, EqualizerType::mmse, 0.0);
    for (std::size_t n = 0; n < N; ++n)
        for (std::size_t m = 0; m < M; ++m) {
            REQUIRE(std::abs(zf.at(m, n) - symbols.at(m, n)) <= 1e-12);
            REQUIRE(std::abs(mmse0.at(m, n) - zf.at(m, n)) <= 1e-12);
        }
}

TEST_CASE("regularized taps shrink towards zero as noise grows") {
    const std::vector<cplx> H = {cplx(0.5, 0.5)};
    ComplexSymbolGrid y(1, 1);
    y.at(0, 0) = cplx(1.0, 0.0);
    const cplx expected = std::conj(H[0]) / (std::norm(H[0]) + 0.25);
    const auto out = equalize(y, H, EqualizerType::mmse, 0.25);
    REQUIRE(std::abs(out.at(0, 0) - expected) <= 1e-15);
    double previous = 1e9;
    for (double nv : {0.0, 0.1, 1.0, 10.0}) {
        const auto e = equalize(y, H, EqualizerType::mmse, nv);
        REQUIRE(std::abs(e.at(0, 0)) < previous);
        previous = std::abs(e.at(0, 0));
    }
}

TEST_CASE("regularization beats plain inversion in mean-square error under noise") {
    const std::size_t M = 64, N = 20;
    const auto symbols = random_grid(M, N, 7);
    Rng rng(8);
    std::vector<cplx> H(M);
    for (auto& h : H) h = 0.5 * rng.gaussian_cplx();
    const double nv = 0.5;
    ComplexSymbolGrid y(M, N);
    for (std::size_t n = 0; n < N; ++n)
        for (std::size_t m = 0; m < M; ++m)
            y.at(m, n) = H[m] * symbols.at(m, n) + std::sqrt(nv / 2.0) * rng.gaussian_cplx();
    double mse_zf = 0.0, mse_mmse = 0.0;
    const auto zf = equalize(y, H, EqualizerType::zf);
    const auto mm = equalize(y, H, EqualizerType::mmse, nv);
    for (std::size_t n = 0; n < N; ++n)
        for (std::size_t m = 0; m < M; ++m) {
            mse_zf += std::norm(zf.at(m, n) - symbols.at(m, n));
            mse_mmse += std::norm(mm.at(m, n) - symbols.at(m, n));
        }
    REQUIRE(mse_mmse < mse_zf);
}

TEST_CASE("dead subcarriers are flagged and zeroed") {
    const std::vector<cplx> H = {cplx(0.0, 0.0), cplx(1.0, 0.0)};
    ComplexSymbolGrid y(2, 2);
    y.at(0, 0) = cplx(3.0, 0.0);
    y.at(1, 0) = cplx(2.0, 0.0);
    std::vector<std::uint8_t> flags;
    const auto out = equalize(y, H, EqualizerType::zf, 0.0, &flags);
    REQUIRE(flags == std::vector<std::uint8_t>{1, 0});
    REQUIRE(out.at(0, 0) == cplx(0.0, 0.0));
    REQUIRE(out.at(1, 0) == cplx(2.0, 0.0));
}

TEST_CASE("equalizer rejects malformed input") {
    ComplexSymbolGrid y(2, 1);
    REQUIRE_THROWS_AS(equalize(y, std::vector<cplx>(3), EqualizerType::zf), FramingError);
    REQUIRE_THROWS_AS(equalize(y, std::vector<cplx>(2), EqualizerType::mmse, -0.5), ConfigError);
    REQUIRE_THROWS_AS(equalizer_from_string("bogus"), ConfigError);
    REQUIRE(equalizer_from_string("mmse") == EqualizerType::mmse);
}
