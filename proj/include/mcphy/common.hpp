#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace mcphy {

using cplx = std::complex<double>;

inline constexpr double pi = std::numbers::pi;
inline constexpr double inv_sqrt2 = 0.70710678118654752440;

// Thrown for invalid parameters (sizes, enum values, malformed config files).
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Thrown when a signal/grid does not frame correctly (wrong length, odd
// column count where pairs are required, bit count not divisible, ...).
struct FramingError : std::runtime_error {
    explicit FramingError(const std::string& what) : std::runtime_error(what) {}
};

// Thrown for degenerate channel inputs (e.g. an all-zero tap vector).
struct ChannelError : std::runtime_error {
    explicit ChannelError(const std::string& what) : std::runtime_error(what) {}
};

// Thrown on file I/O problems (fixtures, CSV, plots).
struct IoError : std::runtime_error {
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

// Thrown when an iterative optimisation stops improving before reaching its
// convergence tolerance; carries the best objective value seen so far.
struct ConvergenceError : std::runtime_error {
    double best_value;
    ConvergenceError(const std::string& what, double best)
        : std::runtime_error(what), best_value(best) {}
};

// Dense column-major grid indexed as (subcarrier m, time instant n).
// Column n holds the M values of one symbol instant.
template <typename T>
class Grid {
  public:
    Grid() = default;
    Grid(std::size_t rows, std::size_t cols, T fill = T{})
        : rows_(rows), cols_(cols), values_(rows * cols, fill) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t size() const { return values_.size(); }

    T& at(std::size_t m, std::size_t n) { return values_[n * rows_ + m]; }
    const T& at(std::size_t m, std::size_t n) const { return values_[n * rows_ + m]; }

    std::vector<T>& values() { return values_; }
    const std::vector<T>& values() const { return values_; }

    bool same_shape(const Grid& other) const {
        return rows_ == other.rows_ && cols_ == other.cols_;
    }

  private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<T> values_;
};

using RealSymbolGrid = Grid<double>;
using ComplexSymbolGrid = Grid<cplx>;

// Complex baseband sample stream plus the sampling rate it was produced at.
// The rate is carried as metadata only; all signal processing is in samples.
struct BasebandSignal {
    std::vector<cplx> samples;
    double sample_rate_hz = 1.0;
};

inline bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

}  // namespace mcphy
